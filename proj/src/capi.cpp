#include "choiceapprox/choiceapprox.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "choiceapprox/datasets.hpp"
#include "choiceapprox/error.hpp"
#include "choiceapprox/fitters.hpp"
#include "choiceapprox/mixture_logit.hpp"
#include "choiceapprox/reports.hpp"

using namespace choiceapprox;

struct ca_space {
  Dataset dataset;
  SpacePtr space;
};

struct ca_choice {
  StochasticChoice rho;
};

struct ca_report {
  FitReport fit;
  SpacePtr space;
};

namespace {

thread_local std::string last_error;

template <class Fn>
ca_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return CA_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<ca_status>(static_cast<int>(e.kind()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CA_ERR_NUMERIC;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CA_ERR_NUMERIC;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw UsageError(std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Format to_format(ca_format f) {
  switch (f) {
    case CA_FORMAT_TEXT: return Format::Text;
    case CA_FORMAT_CSV: return Format::Csv;
    case CA_FORMAT_JSON: return Format::Json;
  }
  throw UsageError("unknown output format");
}

GreedyConfig to_cpp(const ca_greedy_config* c) {
  GreedyConfig out;
  if (c) {
    out.steps = c->steps;
    out.restarts = c->restarts;
    out.inner_iterations = c->inner_iterations;
    out.seed = c->seed;
  }
  return out;
}

EmConfig to_cpp(const ca_em_config* c) {
  EmConfig out;
  if (c) {
    out.mixtures = c->mixtures;
    out.random_inits = c->random_inits;
    out.seed = c->seed;
    out.tolerance = c->tolerance;
    out.max_iterations = c->max_iterations;
  }
  return out;
}

void to_cpp(const ca_grid_config* c, GridSpec& grid, ScreenConfig& screen) {
  if (!c) return;
  grid = {c->min, c->max, c->step};
  screen.exhaustive = c->exhaustive != 0;
  screen.steps = c->screen_steps;
  screen.restarts = c->screen_restarts;
  screen.inner_iterations = c->screen_inner_iterations;
  screen.refine = c->refine;
}

TableConfig to_cpp(const ca_table_config* c) {
  TableConfig out;
  if (!c) return out;
  out.greedy = to_cpp(&c->greedy);
  out.em = to_cpp(&c->em);
  to_cpp(&c->grid, out.grid, out.screen);
  out.run_greedy = c->run_greedy != 0;
  out.run_em = c->run_em != 0;
  if (c->degrees && c->degree_count) out.degrees.assign(c->degrees, c->degrees + c->degree_count);
  out.jobs = c->jobs;
  return out;
}

std::vector<double> eta_of(const double* eta, const ChoiceSpace& space) {
  if (!eta) return {};
  return std::vector<double>(eta, eta + space.size());
}

size_t copy_out(const std::vector<double>& v, double* out, size_t capacity) {
  if (out)
    for (size_t i = 0; i < v.size() && i < capacity; ++i) out[i] = v[i];
  return v.size();
}

ca_space* make_space(Dataset dataset, const MenuSpec& spec) {
  auto space = ChoiceSpace::build(dataset.alternatives, spec);
  return new ca_space{std::move(dataset), std::move(space)};
}

}  // namespace

extern "C" {

const char* ca_version(void) { return "0.1.0"; }

const char* ca_last_error(void) { return last_error.c_str(); }

void ca_string_free(char* s) { delete[] s; }

void ca_greedy_config_init(ca_greedy_config* c) {
  if (!c) return;
  const GreedyConfig d;
  *c = {d.steps, d.restarts, d.inner_iterations, d.seed};
}

void ca_em_config_init(ca_em_config* c) {
  if (!c) return;
  const EmConfig d;
  *c = {d.mixtures, d.random_inits, d.seed, d.tolerance, d.max_iterations};
}

void ca_grid_config_init(ca_grid_config* c) {
  if (!c) return;
  const GridSpec g;
  const ScreenConfig s;
  *c = {g.min, g.max, g.step, s.exhaustive ? 1 : 0, s.steps, s.restarts, s.inner_iterations, s.refine};
}

void ca_table_config_init(ca_table_config* c) {
  if (!c) return;
  ca_greedy_config_init(&c->greedy);
  ca_em_config_init(&c->em);
  ca_grid_config_init(&c->grid);
  c->run_greedy = 1;
  c->run_em = 1;
  c->degrees = nullptr;
  c->degree_count = 0;
  c->jobs = 1;
}

ca_status ca_space_builtin(const char* name, ca_space** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    if (std::string(name) != "fishing") throw UsageError("unknown builtin dataset '" + std::string(name) + "'");
    *out = make_space(builtin_fishing(), MenuSpec::all_subsets());
  });
}

ca_status ca_space_load(const char* path, ca_space** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = make_space(load_dataset(path), MenuSpec::all_subsets());
  });
}

ca_status ca_space_from_arrays(size_t alternatives, size_t k, const char* const* ids, const double* chars,
                               int single_menu, ca_space** out) {
  return guarded([&] {
    require(ids, "ids");
    require(out, "out");
    if (k > 0) require(chars, "chars");
    Dataset ds;
    for (size_t j = 0; j < k; ++j) ds.characteristic_names.push_back("c" + std::to_string(j + 1));
    for (size_t i = 0; i < alternatives; ++i) {
      require(ids[i], "id");
      ds.alternatives.push_back({ids[i], std::vector<double>(chars + i * k, chars + (i + 1) * k)});
    }
    *out = make_space(std::move(ds), single_menu ? MenuSpec::single_set() : MenuSpec::all_subsets());
  });
}

void ca_space_free(ca_space* space) { delete space; }
size_t ca_space_size(const ca_space* s) { return s ? s->space->size() : 0; }
size_t ca_space_characteristics(const ca_space* s) { return s ? s->space->k() : 0; }
size_t ca_space_menu_count(const ca_space* s) { return s ? s->space->menus().size() : 0; }
size_t ca_space_entry_count(const ca_space* s) { return s ? s->space->entry_count() : 0; }

ca_status ca_space_save(const ca_space* space, const char* path) {
  return guarded([&] {
    require(space, "space");
    require(path, "path");
    std::ofstream f(path);
    if (!f) throw DataError(std::string("cannot write ") + path);
    save_dataset(f, space->dataset);
  });
}

ca_status ca_choice_vertex(const ca_space* space, const char* ranking, ca_choice** out) {
  return guarded([&] {
    require(space, "space");
    require(ranking, "ranking");
    require(out, "out");
    *out = new ca_choice{vertex_choice(Ranking::parse(ranking, space->space->size()), space->space)};
  });
}

ca_status ca_choice_mixture(const ca_space* space, const char* ranking, double alpha, ca_choice** out) {
  return guarded([&] {
    require(space, "space");
    require(ranking, "ranking");
    require(out, "out");
    *out = new ca_choice{mixture_target(Ranking::parse(ranking, space->space->size()), alpha, space->space)};
  });
}

ca_status ca_choice_uniform(const ca_space* space, ca_choice** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = new ca_choice{uniform_rum(space->space)};
  });
}

ca_status ca_choice_load(const ca_space* space, const char* path, ca_choice** out) {
  return guarded([&] {
    require(space, "space");
    require(path, "path");
    require(out, "out");
    *out = new ca_choice{load_choice(path, space->space)};
  });
}

ca_status ca_choice_from_values(const ca_space* space, const double* values, size_t count, ca_choice** out) {
  return guarded([&] {
    require(space, "space");
    require(values, "values");
    require(out, "out");
    if (count != space->space->entry_count()) throw DataError("choice values have the wrong length");
    *out = new ca_choice{ingest_choice(space->space, std::vector<double>(values, values + count))};
  });
}

ca_status ca_choice_save(const ca_choice* choice, const char* path) {
  return guarded([&] {
    require(choice, "choice");
    require(path, "path");
    std::ofstream f(path);
    if (!f) throw DataError(std::string("cannot write ") + path);
    save_choice(f, choice->rho);
  });
}

void ca_choice_free(ca_choice* choice) { delete choice; }

ca_status ca_choice_values(const ca_choice* choice, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(choice, "choice");
    const auto v = choice->rho.values();
    if (out)
      for (size_t i = 0; i < v.size() && i < capacity; ++i) out[i] = v[i];
    if (count) *count = v.size();
  });
}

ca_status ca_distance(const ca_choice* a, const ca_choice* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = distance(a->rho, b->rho);
  });
}

ca_status ca_is_representable(const ca_space* space, const char* ranking, int degree, int* out) {
  return guarded([&] {
    require(space, "space");
    require(ranking, "ranking");
    require(out, "out");
    *out = is_representable(Ranking::parse(ranking, space->space->size()), degree, *space->space).representable;
  });
}

ca_status ca_greedy_bound(const ca_space* space, int steps, double* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = greedy_bound(steps, *space->space);
  });
}

ca_status ca_mixture_bound(const ca_space* space, size_t* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = mixture_bound(*space->space);
  });
}

ca_status ca_fit_greedy(const ca_choice* target, int degree, const ca_greedy_config* config, const double* eta,
                        ca_report** out) {
  return guarded([&] {
    require(target, "target");
    require(out, "out");
    auto cfg = to_cpp(config);
    cfg.eta = eta_of(eta, *target->rho.space());
    *out = new ca_report{greedy_fit(target->rho, degree, cfg), target->rho.space()};
  });
}

ca_status ca_fit_em(const ca_choice* target, int degree, const ca_em_config* config, const double* eta,
                    ca_report** out) {
  return guarded([&] {
    require(target, "target");
    require(out, "out");
    auto cfg = to_cpp(config);
    cfg.eta = eta_of(eta, *target->rho.space());
    *out = new ca_report{em_fit(target->rho, degree, cfg), target->rho.space()};
  });
}

ca_status ca_fit_fixed_effects(const ca_choice* target, int degree, ca_engine engine, const ca_greedy_config* greedy,
                               const ca_em_config* em, const ca_grid_config* grid, size_t jobs, ca_report** out) {
  return guarded([&] {
    require(target, "target");
    require(out, "out");
    if (engine != CA_ENGINE_GREEDY && engine != CA_ENGINE_EM) throw UsageError("unknown engine");
    GridSpec g;
    ScreenConfig s;
    to_cpp(grid, g, s);
    auto fit = fixed_effect_search(target->rho, degree, engine == CA_ENGINE_GREEDY ? Engine::Greedy : Engine::Em,
                                   to_cpp(greedy), to_cpp(em), g, s, jobs);
    *out = new ca_report{std::move(fit), target->rho.space()};
  });
}

void ca_report_free(ca_report* report) { delete report; }
double ca_report_error(const ca_report* r) { return r ? r->fit.error : 0.0; }
int ca_report_iterations(const ca_report* r) { return r ? r->fit.iterations : 0; }
size_t ca_report_components(const ca_report* r) { return r ? r->fit.model.size() : 0; }

size_t ca_report_trace(const ca_report* r, double* out, size_t capacity) {
  return r ? copy_out(r->fit.trace, out, capacity) : 0;
}

size_t ca_report_likelihood_trace(const ca_report* r, double* out, size_t capacity) {
  return r ? copy_out(r->fit.likelihood_trace, out, capacity) : 0;
}

size_t ca_report_eta(const ca_report* r, double* out, size_t capacity) {
  return r ? copy_out(r->fit.eta, out, capacity) : 0;
}

ca_status ca_report_choice(const ca_report* report, ca_choice** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = new ca_choice{model_choice(report->fit.model, report->space)};
  });
}

ca_status ca_report_render(const ca_report* report, ca_format format, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = dup(render(report->fit, *report->space, to_format(format)));
  });
}

ca_status ca_run_diagnose(const ca_space* space, int degree, size_t jobs, ca_format format, char** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = dup(render(run_diagnose(space->space, degree, jobs), to_format(format)));
  });
}

ca_status ca_run_census(const ca_space* space, int degree, size_t jobs, ca_format format, char** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = dup(render(run_census(space->space, degree, jobs), to_format(format)));
  });
}

ca_status ca_run_table1(const ca_space* space, const ca_table_config* config, ca_format format, char** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = dup(render(run_table1(space->space, to_cpp(config)), to_format(format)));
  });
}

ca_status ca_run_table2(const ca_space* space, const ca_table_config* config, ca_format format, char** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = dup(render(run_table2(space->space, to_cpp(config)), to_format(format)));
  });
}

ca_status ca_run_certificate(const ca_space* space, const char* ranking, ca_format format, char** out) {
  return guarded([&] {
    require(space, "space");
    require(ranking, "ranking");
    require(out, "out");
    const auto cert = adjacency_certificate(Ranking::parse(ranking, space->space->size()), space->space);
    *out = dup(render(cert, *space->space, to_format(format)));
  });
}

}  // extern "C"
