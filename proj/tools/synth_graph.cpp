// Writes synthetic pose graphs as .g2o (noisy graph, optionally ground truth).

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "posekit/g2o.hpp"
#include "posekit/graphslam.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate a synthetic pose graph"};
  std::string kind = "circle2d", out, truth_out;
  int n = 50;
  double sigma_t = 0.05, sigma_r = 0.01;
  std::uint64_t seed = 1;
  app.add_option("--kind", kind)->check(CLI::IsMember({"circle2d", "grid2d", "sphere3d"}));
  app.add_option("--n", n)->check(CLI::Range(3, 1000000));
  app.add_option("--sigma-t", sigma_t)->check(CLI::NonNegativeNumber);
  app.add_option("--sigma-r", sigma_r)->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed);
  app.add_option("--out", out, "noisy graph")->required();
  app.add_option("--truth-out", truth_out, "ground-truth graph");
  CLI11_PARSE(app, argc, argv);

  const std::map<std::string, posekit::SynthKind> kinds{{"circle2d", posekit::SynthKind::circle2d},
                                                        {"grid2d", posekit::SynthKind::grid2d},
                                                        {"sphere3d", posekit::SynthKind::sphere3d}};
  try {
    const auto g = posekit::synth_graph(kinds.at(kind), n, {sigma_t, sigma_r}, seed);
    posekit::write_g2o_file(out, g.noisy);
    if (!truth_out.empty()) posekit::write_g2o_file(truth_out, g.truth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
