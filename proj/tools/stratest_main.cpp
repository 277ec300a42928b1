#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stratest/cli.hpp"
#include "stratest/errors.hpp"

using namespace stratest;

int main(int argc, char** argv) {
  CLI::App app{"Stratified-sampling mean estimators with two auxiliary variables"};
  app.require_subcommand(1, 1);

  cli::CommandConfig cfg;
  std::string policy = "prefer-correlation";
  std::string format = "text";
  std::string n_h;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input,
                    "Summary document (.json) or microdata (.csv); default: embedded dataset");
    sub->add_option("--n-h", n_h, "Comma-separated stratum sample sizes");
    sub->add_option("--policy", policy, "prefer-correlation | prefer-covariance | strict")
        ->check(CLI::IsMember({"prefer-correlation", "prefer-covariance", "strict"}));
    sub->add_option("--format", format, "text | csv | json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
  };

  auto* moments = app.add_subcommand("moments", "Relative moments and combined slopes B1, B2");
  add_common(moments);
  auto* mse = app.add_subcommand("mse", "First-order MSE of every estimator, optimum, diagnostics");
  add_common(mse);
  mse->add_option("--m1", cfg.m1, "tp exponent for x");
  mse->add_option("--m2", cfg.m2, "tp exponent for z");
  auto* pre = app.add_subcommand("pre", "Percent relative efficiency table and dominance report");
  add_common(pre);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the first-order theory");
  auto* sim_input =
      simulate->add_option("--input", cfg.input, "Finite population microdata (.csv)");
  simulate->add_option("--config", cfg.config, "Synthetic population config (.json)")
      ->excludes(sim_input);
  simulate->add_option("--n-h", n_h, "Comma-separated stratum sample sizes");
  simulate->add_option("--seed", cfg.seed, "Master seed (u64)");
  simulate->add_option("--R", cfg.replications, "Replications")->check(CLI::PositiveNumber);
  simulate->add_option("--m1", cfg.m1, "Fixed tp exponent for x");
  simulate->add_option("--m2", cfg.m2, "Fixed tp exponent for z");
  simulate->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--format", format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  auto* reproduce = app.add_subcommand(
      "reproduce-kk2009", "Embedded school dataset under both covariance policies");
  reproduce->add_option("--format", format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.policy = parse_policy(policy);
    cfg.format = render::parse_format(format);
    if (!n_h.empty()) {
      std::vector<long> sizes;
      std::stringstream ss(n_h);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long v = std::stol(item, &used);
        if (used != item.size()) throw InputError("--n-h: not an integer: '" + item + "'");
        sizes.push_back(v);
      }
      cfg.n_h = std::move(sizes);
    }
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::kInputError;
  }

  const auto result = cli::run(cfg);
  std::cout << result.output;
  if (!result.error.empty()) std::cerr << result.error << '\n';
  return result.exit_code;
}
