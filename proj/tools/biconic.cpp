#include <CLI11.hpp>

#include <iostream>

#include "biconic/cli.hpp"

using namespace biconic;

namespace {

struct Flags {
  std::string primes, target, point;
};

void common(CLI::App* sub, RunConfig& cfg, Flags& f) {
  sub->add_option("--fixture", cfg.fixture, "surface spec file")->required();
  sub->add_option("--depth", cfg.depth, "chain depth")->capture_default_str();
  sub->add_option("--branch", cfg.branch, "children per node")->capture_default_str();
  sub->add_option("--height", cfg.height, "parameter height bound")->capture_default_str();
  sub->add_option("--primes", f.primes, "comma-separated primes (default: three smallest good primes)");
  sub->add_option("--precision", cfg.precision, "p-adic precision m")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--retries", cfg.retries, "steering attempts")->capture_default_str();
  sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biconic: rational points on bi-conic surfaces w^2 = f4(x, y, z)"};
  app.require_subcommand(1);
  RunConfig cfg;
  Flags f;
  std::optional<int> threshold;

  auto* analyze = app.add_subcommand("analyze", "singular fibers, bad loci, hypotheses and certificates");
  auto* generate = app.add_subcommand("generate", "grow points by alternating conic fibrations");
  auto* steer = app.add_subcommand("steer", "build a chain from the seed to a p-adic target");
  auto* probe = app.add_subcommand("probe", "coverage of smooth residue classes");
  auto* certify = app.add_subcommand("certify", "obstruction certificate at a rational point");
  for (auto* sub : {analyze, generate, steer, probe, certify}) common(sub, cfg, f);
  steer->add_option("--target", f.target, "target x,y,z,w mod p^m (default: the seed's class)");
  probe->add_option("--threshold", threshold, "minimum coverage in percent; exit 4 below it")
      ->check(CLI::Range(0, 100));
  certify->add_option("--point", f.point, "point x,y,z,w")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.threshold = threshold;
  try {
    if (!f.primes.empty()) cfg.primes = flag_integers("primes", f.primes);
    if (!f.target.empty()) {
      auto v = flag_integers("target", f.target, 4);
      cfg.target = std::array<Integer, 4>{v[0], v[1], v[2], v[3]};
    }
    if (!f.point.empty()) {
      auto v = flag_values("point", f.point, 4);
      cfg.point = std::array<Rational, 4>{v[0], v[1], v[2], v[3]};
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
  return run_command(cfg, std::cout, std::cerr);
}
