#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "proxcalc/cli.hpp"

namespace {

using proxcalc::cli::Format;
using proxcalc::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& c, std::string& format) {
  sub->add_option("--out", c.out, "Write the report to this file instead of stdout");
  sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  sub->add_option("--tol", c.tol, "Tolerance override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal operators, Moreau envelopes, conjugates and reconstruction of convex functions"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format = "text";
  double f_at_anchor = 0.0;

  auto* prox = app.add_subcommand("prox", "prox_{lambda f}(x)");
  auto* envelope = app.add_subcommand("envelope", "Moreau envelope value and gradient at x");
  auto* conjugate = app.add_subcommand("conjugate", "Closed-form or grid conjugate");
  auto* reconstruct = app.add_subcommand("reconstruct", "Recover f from prox samples");
  auto* compare = app.add_subcommand("compare", "Comparison check for f and g");
  auto* verify = app.add_subcommand("verify-all", "Run every check for f and g");

  for (auto* sub : {prox, envelope, conjugate, reconstruct, compare, verify}) add_common(sub, c, format);
  for (auto* sub : {prox, envelope, conjugate}) {
    sub->add_option("--f", c.f_spec, "Function spec file")->required();
    sub->add_option("--x", c.x, "Point, comma-separated");
  }
  for (auto* sub : {prox, envelope}) {
    sub->add_option("--lambda", c.lambda, "Prox parameter")->capture_default_str();
    sub->add_flag("--numerical", c.numerical, "Use the numerical solver");
  }
  conjugate->add_option("--grid", c.grid, "Grid lo:hi:count per axis, ';' between axes");
  conjugate->add_option("--queries", c.queries, "CSV of query points");

  reconstruct->add_option("--oracle-table", c.oracle_table, "CSV rows of input point then prox output");
  reconstruct->add_option("--f", c.f_spec, "Use the catalog prox of this function as the oracle");
  reconstruct->add_option("--anchor", c.anchor, "Anchor x0 in dom f; one value repeats on every axis");
  auto* fa = reconstruct->add_option("--f-at-anchor", f_at_anchor, "f(x0), pins the additive constant");
  reconstruct->add_option("--grid", c.grid, "Grid lo:hi:count per axis, ';' between axes")->required();
  reconstruct->add_option("--queries", c.queries, "CSV of query points");
  reconstruct->add_option("--x", c.x, "Single query point");
  reconstruct->add_option("--steps", c.steps, "Simpson panels per ray")->capture_default_str();

  for (auto* sub : {compare, verify}) {
    sub->add_option("--f", c.f_spec, "Function spec file")->required();
    sub->add_option("--g", c.g_spec, "Function spec file")->required();
    sub->add_option("--anchor", c.anchor, "Anchor x0; one value repeats on every axis");
    sub->add_option("--samples", c.samples, "Number of random sample points")->capture_default_str();
    sub->add_option("--radius", c.radius, "Sample ball radius")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  }
  verify->add_option("--lambda", c.lambda, "Envelope parameter of the gradient check")->capture_default_str();
  verify->add_option("--ell", c.ell, "Constant of the norm and Lipschitz checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return proxcalc::cli::kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (fa->count() > 0) c.f_at_anchor = f_at_anchor;
  c.format = format == "csv" ? Format::csv : Format::text;
  return proxcalc::cli::run(c, std::cout, std::cerr);
}
