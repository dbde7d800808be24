// randinfo: run one experiment and write CSV or JSON rows.
//
//   randinfo <experiment> [--n GRID] [--d D] [--p P] [--q Q] [--s S] ...
//
// Exit codes: 0 ok, 1 usage, 2 invariant violation or solver failure,
// 3 resource guard (rows finished before the guard are still written).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "randinfo/harness.hpp"

namespace h = randinfo::harness;

namespace {

struct RawOptions {
  std::string n, ell, c, p, q, format = "csv", output;
  std::optional<int> d;
  std::optional<double> s, alpha, beta;
  std::optional<std::size_t> m, restarts, trials;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

std::vector<double> parse_reals(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    out.push_back(h::parse_exponent(std::string_view(list).substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

h::ExperimentConfig to_config(const std::string& name, const RawOptions& o, const CLI::App& sub) {
  h::ExperimentConfig cfg;
  cfg.experiment = h::parse_experiment(name);
  if (sub.get_option_no_throw("--n") != nullptr && sub.count("--n") > 0) cfg.n_grid = h::parse_grid(o.n);
  if (sub.get_option_no_throw("--ell") != nullptr && sub.count("--ell") > 0) cfg.ell_grid = h::parse_grid(o.ell);
  if (!o.c.empty()) cfg.c = parse_reals(o.c);
  if (!o.p.empty()) cfg.p = h::parse_exponent(o.p);
  if (!o.q.empty()) cfg.q = h::parse_exponent(o.q);
  cfg.d = o.d;
  cfg.s = o.s;
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;
  cfg.m = o.m;
  cfg.restarts = o.restarts;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.output_path = o.output;
  cfg.workers = o.workers;
  if (o.format == "csv")
    cfg.format = h::Format::csv;
  else if (o.format == "json")
    cfg.format = h::Format::json;
  else
    throw randinfo::InvalidArgument("--format must be csv or json");
  return h::validate(std::move(cfg));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random information experiments: Monte Carlo estimates with exact references"};
  app.require_subcommand(1);
  RawOptions o;

  // options shared by every subcommand
  auto common = [&](CLI::App* sub) {
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--seed", o.seed, "master seed")->default_val(1);
    sub->add_option("--output", o.output, "output file (default: $RANDINFO_OUTPUT_DIR/<experiment>.<fmt> or stdout)");
    sub->add_option("--format", o.format, "csv or json")->default_val("csv");
    sub->add_option("--workers", o.workers, "worker threads (0: hardware concurrency)");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "n grid: 1,2,5 or a..b or a..b:geometric:k")->required();
  };

  std::map<std::string, CLI::App*> subs;
  subs["spacings"] = app.add_subcommand("spacings", "uniform spacings power sums and maximal gap");
  grid(subs["spacings"]);
  subs["spacings"]->add_option("--s", o.s, "power sum exponent s (sum of l^(s+1))");

  subs["coupon"] = app.add_subcommand("coupon", "coupon collector mean and tail");
  subs["coupon"]->add_option("--ell", o.ell, "number of labels (grid syntax)");
  subs["coupon"]->add_option("--c", o.c, "tail exponents, comma separated");

  subs["sobolev1d"] = app.add_subcommand("sobolev1d", "W^1_p -> L_q radius surrogate on [0,1]");
  grid(subs["sobolev1d"]);
  subs["sobolev1d"]->add_option("--p", o.p, "p (real >= 1 or inf)");
  subs["sobolev1d"]->add_option("--q", o.q, "q (real >= 1 or inf)");

  subs["lipschitz"] = app.add_subcommand("lipschitz", "Lipschitz functions on the torus: E[r^q]");
  grid(subs["lipschitz"]);
  subs["lipschitz"]->add_option("--d", o.d, "dimension");
  subs["lipschitz"]->add_option("--q", o.q, "q (positive real or inf)");

  subs["sobolev_md"] = app.add_subcommand("sobolev_md", "largest empty ball and thinning on [0,1]^d");
  subs["sobolev_md"]->alias("sobolev-md");
  grid(subs["sobolev_md"]);
  subs["sobolev_md"]->add_option("--s", o.s, "smoothness s (integer)");
  subs["sobolev_md"]->add_option("--d", o.d, "dimension");
  subs["sobolev_md"]->add_option("--p", o.p, "p (real >= 1 or inf)");
  subs["sobolev_md"]->add_option("--q", o.q, "q (real >= 1 or inf)");
  subs["sobolev_md"]->add_option("--alpha", o.alpha, "thinning failure exponent alpha");

  subs["l1"] = app.add_subcommand("l1", "sections of the l1 ball by Gaussian kernels");
  grid(subs["l1"]);
  subs["l1"]->add_option("--m", o.m, "ambient dimension m")->required();
  subs["l1"]->add_option("--restarts", o.restarts, "random restarts of the section search");
  subs["l1"]->add_option("--s", o.s, "sparsity for the basis pursuit recovery rate");

  subs["ellipsoid"] = app.add_subcommand("ellipsoid", "ellipsoid sections by Gaussian kernels");
  grid(subs["ellipsoid"]);
  subs["ellipsoid"]->add_option("--m", o.m, "truncation dimension m")->required();
  subs["ellipsoid"]->add_option("--alpha", o.alpha, "sigma_k = k^-alpha ln^-beta(k+1)");
  subs["ellipsoid"]->add_option("--beta", o.beta, "log exponent beta");

  for (auto& [name, sub] : subs) common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return h::kUsage;
  }

  std::string name;
  const CLI::App* chosen = nullptr;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) {
      name = n;
      chosen = sub;
    }

  h::ExperimentConfig cfg;
  try {
    cfg = to_config(name, o, *chosen);
  } catch (const randinfo::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kUsage;
  }

  const h::RunResult res = h::run(cfg);
  const std::string text = h::render(res.rows, cfg.format);
  const std::string path = h::resolve_output_path(cfg);
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(path, std::ios::binary);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
      std::cerr << "error: cannot write " << path << "\n";
      return h::kUsage;
    }
  }
  if (res.exit_code != h::kOk) std::cerr << "error: " << res.diagnostic << "\n";
  return res.exit_code;
}
