// Command-line front end over the C API.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "choiceapprox/choiceapprox.h"

namespace {

struct Failure {
  ca_status status;
};

void check(ca_status s) {
  if (s != CA_OK) throw Failure{s};
}

struct SpaceDeleter {
  void operator()(ca_space* p) const { ca_space_free(p); }
};
struct ChoiceDeleter {
  void operator()(ca_choice* p) const { ca_choice_free(p); }
};
struct ReportDeleter {
  void operator()(ca_report* p) const { ca_report_free(p); }
};
using SpaceHandle = std::unique_ptr<ca_space, SpaceDeleter>;
using ChoiceHandle = std::unique_ptr<ca_choice, ChoiceDeleter>;
using ReportHandle = std::unique_ptr<ca_report, ReportDeleter>;

void emit(char* text) {
  std::fputs(text, stdout);
  ca_string_free(text);
}

struct Options {
  std::string data;
  std::string builtin;
  std::vector<int> degrees;
  std::uint64_t seed = 0;
  std::string out = "text";
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());

  ca_greedy_config greedy{};
  ca_em_config em{};
  ca_grid_config grid{};

  std::string eta;
  bool search_eta = false;
  std::string engine = "both";

  std::string ranking;
  std::optional<double> alpha;
  bool uniform_rum = false;
  std::string target_file;
  int bound_steps = 1000;
};

ca_format format_of(const std::string& name) {
  if (name == "csv") return CA_FORMAT_CSV;
  if (name == "json") return CA_FORMAT_JSON;
  return CA_FORMAT_TEXT;
}

int degree_of(const Options& o) { return o.degrees.empty() ? 1 : o.degrees.front(); }

SpaceHandle open_space(const Options& o) {
  ca_space* s = nullptr;
  if (!o.data.empty())
    check(ca_space_load(o.data.c_str(), &s));
  else
    check(ca_space_builtin(o.builtin.empty() ? "fishing" : o.builtin.c_str(), &s));
  return SpaceHandle(s);
}

ChoiceHandle open_target(const Options& o, const ca_space* space) {
  const int sources = (!o.ranking.empty()) + o.uniform_rum + (!o.target_file.empty());
  if (sources != 1) throw CLI::ValidationError("target", "give exactly one of --ranking, --uniform-rum, --target-file");
  if (o.alpha && o.ranking.empty()) throw CLI::ValidationError("--alpha", "needs --ranking");
  ca_choice* c = nullptr;
  if (!o.ranking.empty()) {
    if (o.alpha)
      check(ca_choice_mixture(space, o.ranking.c_str(), *o.alpha, &c));
    else
      check(ca_choice_vertex(space, o.ranking.c_str(), &c));
  } else if (o.uniform_rum) {
    check(ca_choice_uniform(space, &c));
  } else {
    check(ca_choice_load(space, o.target_file.c_str(), &c));
  }
  return ChoiceHandle(c);
}

std::vector<double> parse_eta(const std::string& text, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--eta", "'" + item + "' is not a number");
    }
  }
  if (out.size() != n)
    throw CLI::ValidationError("--eta", "expected " + std::to_string(n) + " comma-separated values");
  return out;
}

void run_fit(const Options& o, bool greedy) {
  auto space = open_space(o);
  auto target = open_target(o, space.get());
  ca_report* r = nullptr;
  if (o.search_eta) {
    if (!o.eta.empty()) throw CLI::ValidationError("--eta", "cannot be combined with --search-eta");
    check(ca_fit_fixed_effects(target.get(), degree_of(o), greedy ? CA_ENGINE_GREEDY : CA_ENGINE_EM, &o.greedy,
                               &o.em, &o.grid, o.jobs, &r));
  } else {
    std::vector<double> eta;
    if (!o.eta.empty()) eta = parse_eta(o.eta, ca_space_size(space.get()));
    const double* e = eta.empty() ? nullptr : eta.data();
    if (greedy)
      check(ca_fit_greedy(target.get(), degree_of(o), &o.greedy, e, &r));
    else
      check(ca_fit_em(target.get(), degree_of(o), &o.em, e, &r));
  }
  ReportHandle report(r);
  char* text = nullptr;
  check(ca_report_render(report.get(), format_of(o.out), &text));
  emit(text);
}

ca_table_config table_config(const Options& o) {
  ca_table_config c;
  ca_table_config_init(&c);
  c.greedy = o.greedy;
  c.em = o.em;
  c.grid = o.grid;
  c.run_greedy = o.engine != "em";
  c.run_em = o.engine != "greedy";
  c.degrees = o.degrees.empty() ? nullptr : o.degrees.data();
  c.degree_count = o.degrees.size();
  c.jobs = o.jobs;
  return c;
}

void run_bound(const Options& o) {
  auto space = open_space(o);
  double bound = 0.0;
  std::size_t mixtures = 0;
  check(ca_greedy_bound(space.get(), o.bound_steps, &bound));
  check(ca_mixture_bound(space.get(), &mixtures));
  char buf[256];
  switch (format_of(o.out)) {
    case CA_FORMAT_CSV:
      std::snprintf(buf, sizeof buf, "steps,greedy_bound,mixture_bound\n%d,%.12g,%zu\n", o.bound_steps, bound, mixtures);
      break;
    case CA_FORMAT_JSON:
      std::snprintf(buf, sizeof buf, "{\n  \"steps\": %d,\n  \"greedy_bound\": %.17g,\n  \"mixture_bound\": %zu\n}\n",
                    o.bound_steps, bound, mixtures);
      break;
    default:
      std::snprintf(buf, sizeof buf, "greedy bound after %d steps: %.6f\nmixture bound: %zu\n", o.bound_steps, bound,
                    mixtures);
  }
  std::fputs(buf, stdout);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  ca_greedy_config_init(&o.greedy);
  ca_em_config_init(&o.em);
  ca_grid_config_init(&o.grid);

  CLI::App app{"Degree-d mixed logit approximation of random utility models"};
  app.set_version_flag("--version", std::string(ca_version()));
  app.require_subcommand(1);
  app.fallthrough();

  auto* source = app.add_option_group("source");
  source->add_option("--data", o.data, "alternatives CSV (id,<char_1>,...,<char_k>)");
  source->add_option("--builtin", o.builtin, "embedded dataset")->check(CLI::IsMember({"fishing"}));
  source->require_option(0, 1);
  app.add_option("--degree", o.degrees, "feature degree d (tables accept several)")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--out", o.out, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--jobs", o.jobs, "worker thread cap")->check(CLI::PositiveNumber);

  app.add_option("--steps", o.greedy.steps, "greedy steps")->check(CLI::PositiveNumber);
  app.add_option("--restarts", o.greedy.restarts, "greedy inner restarts")->check(CLI::PositiveNumber);
  app.add_option("--inner-iters", o.greedy.inner_iterations, "greedy inner iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--mixtures", o.em.mixtures, "EM component count (0: mixture bound)");
  app.add_option("--inits", o.em.random_inits, "EM random initializations")->check(CLI::PositiveNumber);
  app.add_option("--em-tol", o.em.tolerance, "EM stop tolerance on the L2 distance change")->check(CLI::PositiveNumber);
  app.add_option("--em-max-iters", o.em.max_iterations, "EM sweep cap")->check(CLI::PositiveNumber);

  app.add_option("--eta", o.eta, "fixed effects, one comma-separated value per alternative");
  app.add_option("--eta-min", o.grid.min, "fixed-effect grid lower end");
  app.add_option("--eta-max", o.grid.max, "fixed-effect grid upper end");
  app.add_option("--eta-step", o.grid.step, "fixed-effect grid spacing")->check(CLI::PositiveNumber);
  app.add_flag("--exhaustive-grid", o.grid.exhaustive, "run the full engine at every grid point");
  app.add_option("--refine", o.grid.refine, "grid points refined after screening")->check(CLI::PositiveNumber);

  auto* diagnose = app.add_subcommand("diagnose", "independence diagnostics, dimensions and census");
  auto* census = app.add_subcommand("census", "representable and unrepresentable rankings");
  auto* fit_greedy = app.add_subcommand("fit-greedy", "greedy mixture fit to a target");
  auto* fit_em = app.add_subcommand("fit-em", "EM mixture fit to a target");
  auto* table1 = app.add_subcommand("table1", "approximation error to every vertex");
  auto* table2 = app.add_subcommand("table2", "approximation error to edge midpoints with fixed effects");
  auto* bound = app.add_subcommand("bound", "greedy convergence bound and mixture bound");
  auto* certificate = app.add_subcommand("certificate", "adjacency certificate for a ranking and its reverse");

  for (auto* sub : {fit_greedy, fit_em}) {
    sub->add_option("--ranking", o.ranking, "target ranking label, best first (e.g. 1234)");
    sub->add_option("--alpha", o.alpha, "weight on the ranking; the rest goes to its reverse")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--uniform-rum", o.uniform_rum, "target the uniform random utility model");
    sub->add_option("--target-file", o.target_file, "target choice CSV (menu,alternative,probability)");
    sub->add_flag("--search-eta", o.search_eta, "search the fixed-effect grid");
  }
  for (auto* sub : {table1, table2})
    sub->add_option("--engine", o.engine, "engines to run")->check(CLI::IsMember({"greedy", "em", "both"}));
  certificate->add_option("--ranking", o.ranking, "ranking label")->required();
  bound->add_option("-n,--n", o.bound_steps, "step count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : CA_ERR_USAGE;
  }
  o.greedy.seed = o.seed;
  o.em.seed = o.seed;
  const ca_format fmt = format_of(o.out);

  try {
    char* text = nullptr;
    if (diagnose->parsed()) {
      auto space = open_space(o);
      check(ca_run_diagnose(space.get(), degree_of(o), o.jobs, fmt, &text));
      emit(text);
    } else if (census->parsed()) {
      auto space = open_space(o);
      check(ca_run_census(space.get(), degree_of(o), o.jobs, fmt, &text));
      emit(text);
    } else if (fit_greedy->parsed() || fit_em->parsed()) {
      run_fit(o, fit_greedy->parsed());
    } else if (table1->parsed() || table2->parsed()) {
      auto space = open_space(o);
      const auto cfg = table_config(o);
      check(table1->parsed() ? ca_run_table1(space.get(), &cfg, fmt, &text)
                             : ca_run_table2(space.get(), &cfg, fmt, &text));
      emit(text);
    } else if (bound->parsed()) {
      run_bound(o);
    } else if (certificate->parsed()) {
      auto space = open_space(o);
      check(ca_run_certificate(space.get(), o.ranking.c_str(), fmt, &text));
      emit(text);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << ca_last_error() << '\n';
    return f.status;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return CA_ERR_USAGE;
  }
  return 0;
}
