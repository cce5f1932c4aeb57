#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cardimax/generator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a seeded family of partial MaxSAT instances", "cardimax-generate"};
  std::uint64_t seed = 1;
  std::string profile_name = "tiny";
  std::size_t count = 10;
  std::string dir = ".";
  cardimax::MediumShape shape;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--profile", profile_name, "tiny | medium")->capture_default_str();
  app.add_option("-n,--count", count)->capture_default_str();
  app.add_option("-o,--out", dir, "output directory")->capture_default_str();
  app.add_option("--vars", shape.num_vars, "medium: variable count (0: random in [100, 400])");
  app.add_option("--optimum", shape.optimum, "medium: planted optimum (0: random in [3, 25])");
  app.add_option("--hard-ratio", shape.hard_ratio, "medium: hard 3-clauses per variable")->capture_default_str();
  app.add_option("--soft-ratio", shape.soft_ratio, "medium: background soft clauses per variable")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  auto profile = cardimax::parse_profile(profile_name);
  if (!profile) {
    std::cerr << "usage error: unknown profile '" << profile_name << "'\n";
    return 1;
  }
  try {
    auto paths = cardimax::write_instances(dir, cardimax::generate_instances(seed, *profile, count, shape));
    std::cout << "wrote " << paths.size() << " instances to " << dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
