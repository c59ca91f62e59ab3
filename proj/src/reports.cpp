#include "choiceapprox/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "choiceapprox/error.hpp"
#include "choiceapprox/mixture_logit.hpp"
#include "parallel.hpp"

namespace choiceapprox {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join_eta(const std::vector<double>& eta) {
  std::string out;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (i) out += ';';
    out += number(eta[i]);
  }
  return out;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

std::vector<Engine> engines_of(const TableConfig& config) {
  std::vector<Engine> engines;
  if (config.run_greedy) engines.push_back(Engine::Greedy);
  if (config.run_em) engines.push_back(Engine::Em);
  if (engines.empty()) throw UsageError("no engine selected");
  return engines;
}

void check_degrees(const std::vector<int>& degrees) {
  if (degrees.empty()) throw UsageError("no degree selected");
  for (int d : degrees)
    if (d < 1) throw UsageError("degree must be at least 1");
}

TableEntry entry_from(const std::string& label, const FitReport& fit, bool searched) {
  TableEntry e;
  e.ranking = label;
  e.degree = fit.degree;
  e.engine = fit.engine;
  e.error = fit.error;
  e.seed = fit.seed;
  e.iterations = fit.iterations;
  if (searched) e.eta = fit.eta;
  return e;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw UsageError("unknown output format '" + std::string(name) + "' (expected csv, text or json)");
}

std::string fixed3(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

const TableEntry* TableReport::find(std::string_view ranking, int degree, Engine engine) const {
  for (const auto& e : entries)
    if (e.ranking == ranking && e.degree == degree && e.engine == engine) return &e;
  return nullptr;
}

TableReport run_table1(const SpacePtr& space, const TableConfig& config) {
  check_degrees(config.degrees);
  TableReport report;
  report.title = "Approximation error to rho^pi";
  report.degrees = config.degrees;
  report.engines = engines_of(config);

  const auto groups = census(1, *space, config.jobs);
  std::vector<Ranking> order = groups.unrepresentable;
  order.insert(order.end(), groups.representable.begin(), groups.representable.end());
  for (const auto& r : groups.unrepresentable) report.rows.emplace_back(r.label(), false);
  for (const auto& r : groups.representable) report.rows.emplace_back(r.label(), true);

  struct Task {
    std::size_t row;
    int degree;
    Engine engine;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < order.size(); ++r)
    for (int d : config.degrees)
      for (Engine e : report.engines) tasks.push_back({r, d, e});

  report.entries.resize(tasks.size());
  detail::parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const auto& task = tasks[i];
    const auto target = vertex_choice(order[task.row], space);
    FitReport fit;
    if (task.engine == Engine::Greedy) {
      auto cfg = config.greedy;
      cfg.eta.clear();
      fit = greedy_fit(target, task.degree, cfg);
    } else {
      auto cfg = config.em;
      cfg.eta.clear();
      fit = em_fit(target, task.degree, cfg);
    }
    report.entries[i] = entry_from(order[task.row].label(), fit, false);
  });
  return report;
}

std::vector<Ranking> table2_rankings(const SpacePtr& space, std::size_t jobs) {
  std::vector<Ranking> out;
  for (const auto& r : census(1, *space, jobs).unrepresentable)
    if (r.label() < reverse(r).label()) out.push_back(r);
  return out;
}

TableReport run_table2(const SpacePtr& space, const TableConfig& config) {
  check_degrees(config.degrees);
  TableReport report;
  report.title = "Approximation error to 1/2 rho^pi + 1/2 rho^pi-";
  report.degrees = config.degrees;
  report.engines = engines_of(config);
  report.searched_eta = true;

  const auto rankings = table2_rankings(space, config.jobs);
  for (const auto& r : rankings) report.rows.emplace_back(r.label(), false);

  for (const auto& r : rankings) {
    const auto target = mixture_target(r, 0.5, space);
    for (int d : config.degrees) {
      std::vector<std::vector<double>> candidates;
      if (config.screen.exhaustive) {
        candidates = grid_points(space->size(), config.grid);
      } else {
        const auto ranked = screen_fixed_effects(target, d, config.grid, config.screen, config.greedy.seed, config.jobs);
        const std::size_t keep = std::min(std::max<std::size_t>(1, config.screen.refine), ranked.size());
        for (std::size_t i = 0; i < keep; ++i) candidates.push_back(ranked[i].eta);
      }
      for (Engine e : report.engines) {
        const auto fit = refine_fixed_effects(target, d, e, config.greedy, config.em, candidates, config.jobs);
        report.entries.push_back(entry_from(r.label(), fit, true));
      }
    }
  }
  return report;
}

std::string render(const TableReport& report, Format format) {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "ranking,degree,engine,error,seed,iterations" << (report.searched_eta ? ",eta" : "") << '\n';
    for (const auto& [label, rep] : report.rows)
      for (int d : report.degrees)
        for (Engine e : report.engines) {
          const auto* entry = report.find(label, d, e);
          if (!entry) continue;
          out << label << ',' << d << ',' << engine_name(e) << ',' << number(entry->error) << ',' << entry->seed
              << ',' << entry->iterations;
          if (report.searched_eta) out << ',' << join_eta(entry->eta);
          out << '\n';
        }
    return out.str();
  }
  if (format == Format::Json) {
    nlohmann::json j;
    j["title"] = report.title;
    j["degrees"] = report.degrees;
    auto& engines = j["engines"] = nlohmann::json::array();
    for (Engine e : report.engines) engines.push_back(engine_name(e));
    auto& rows = j["rows"] = nlohmann::json::array();
    for (const auto& [label, rep] : report.rows) {
      nlohmann::json row{{"ranking", label}, {"representable_d1", rep}};
      auto& cells = row["cells"] = nlohmann::json::array();
      for (int d : report.degrees)
        for (Engine e : report.engines)
          if (const auto* entry = report.find(label, d, e)) {
            nlohmann::json cell{{"degree", d},
                                {"engine", engine_name(e)},
                                {"error", entry->error},
                                {"seed", entry->seed},
                                {"iterations", entry->iterations}};
            if (report.searched_eta) cell["eta"] = entry->eta;
            cells.push_back(cell);
          }
      rows.push_back(row);
    }
    return j.dump(2) + "\n";
  }

  constexpr std::size_t label_width = 18;
  constexpr std::size_t cell_width = 9;
  const std::size_t block = cell_width * report.engines.size();
  out << report.title << '\n';
  out << pad("", label_width);
  for (int d : report.degrees) out << pad("d=" + std::to_string(d), block);
  out << '\n' << pad("Ranking", label_width, true);
  for (std::size_t i = 0; i < report.degrees.size(); ++i)
    for (Engine e : report.engines) out << pad(e == Engine::Greedy ? "Greedy" : "EM", cell_width);
  out << '\n';
  std::optional<bool> group;
  for (const auto& [label, rep] : report.rows) {
    if (!report.searched_eta && group != rep) {
      out << (rep ? "Representable at d=1" : "Unrepresentable at d=1") << '\n';
      group = rep;
    }
    out << pad("  " + label, label_width, true);
    for (int d : report.degrees)
      for (Engine e : report.engines) {
        const auto* entry = report.find(label, d, e);
        out << pad(entry ? fixed3(entry->error) : "-", cell_width);
      }
    out << '\n';
  }
  return out.str();
}

DiagnoseReport run_diagnose(const SpacePtr& space, int degree, std::size_t jobs) {
  if (degree < 1) throw UsageError("degree must be at least 1");
  DiagnoseReport report;
  report.alternatives = space->size();
  report.k = space->k();
  report.degree = degree;
  const FeatureMap map(degree, space->k());
  report.feature_dimension = map.dimension();
  report.generic_capacity = binomial(static_cast<std::size_t>(degree) + space->k(), space->k());
  report.generic_bound_holds = generic_bound(space->size(), degree, space->k());
  const auto points = map.evaluate(*space);
  report.affine = affine_independent(points);
  report.convex = convex_independent(points);
  report.polytope_dimension = polytope_dimension(*space);
  report.mixture_bound = mixture_bound(*space);
  const auto c = census(degree, *space, jobs);
  for (const auto& r : c.unrepresentable) report.unrepresentable.push_back(r.label());
  report.ranking_count = c.representable.size() + c.unrepresentable.size();
  return report;
}

std::string render(const DiagnoseReport& r, Format format) {
  std::ostringstream out;
  if (format == Format::Json) {
    nlohmann::json j{{"alternatives", r.alternatives},
                     {"characteristics", r.k},
                     {"degree", r.degree},
                     {"feature_dimension", r.feature_dimension},
                     {"generic_bound_holds", r.generic_bound_holds},
                     {"generic_capacity", r.generic_capacity},
                     {"affinely_independent", r.affine.independent},
                     {"affine_rank", r.affine.rank},
                     {"affine_required_rank", r.affine.required_rank},
                     {"affine_threshold", r.affine.threshold},
                     {"smallest_retained_pivot", r.affine.smallest_retained_pivot},
                     {"largest_rejected_pivot", r.affine.largest_rejected_pivot},
                     {"convex_independent", r.convex.independent},
                     {"polytope_dimension", r.polytope_dimension},
                     {"mixture_bound", r.mixture_bound},
                     {"rankings", r.ranking_count},
                     {"unrepresentable", r.unrepresentable}};
    j["convex_witness"] = r.convex.witness ? nlohmann::json(*r.convex.witness) : nlohmann::json(nullptr);
    return j.dump(2) + "\n";
  }
  std::string unrep;
  for (std::size_t i = 0; i < r.unrepresentable.size(); ++i) unrep += (i ? " " : "") + r.unrepresentable[i];
  if (format == Format::Csv) {
    out << "key,value\n"
        << "alternatives," << r.alternatives << '\n'
        << "characteristics," << r.k << '\n'
        << "degree," << r.degree << '\n'
        << "feature_dimension," << r.feature_dimension << '\n'
        << "generic_bound_holds," << yes_no(r.generic_bound_holds) << '\n'
        << "generic_capacity," << r.generic_capacity << '\n'
        << "affinely_independent," << yes_no(r.affine.independent) << '\n'
        << "affine_rank," << r.affine.rank << '\n'
        << "affine_required_rank," << r.affine.required_rank << '\n'
        << "convex_independent," << yes_no(r.convex.independent) << '\n'
        << "polytope_dimension," << r.polytope_dimension << '\n'
        << "mixture_bound," << r.mixture_bound << '\n'
        << "unrepresentable_count," << r.unrepresentable.size() << '\n'
        << "unrepresentable," << unrep << '\n';
    return out.str();
  }
  out << "alternatives: " << r.alternatives << ", characteristics: " << r.k << ", degree: " << r.degree
      << ", feature dimension: " << r.feature_dimension << '\n';
  out << "generic bound |X| <= C(d+k,k): " << r.alternatives << (r.generic_bound_holds ? " <= " : " > ")
      << r.generic_capacity << (r.generic_bound_holds ? " (holds)" : " (violated)") << '\n';
  out << "affinely independent: " << yes_no(r.affine.independent) << " (rank " << r.affine.rank << " of "
      << r.affine.required_rank << ", pivot threshold " << number(r.affine.threshold) << ", smallest kept "
      << number(r.affine.smallest_retained_pivot) << ", largest dropped " << number(r.affine.largest_rejected_pivot)
      << ")\n";
  out << "convex independent: " << yes_no(r.convex.independent);
  if (r.convex.witness) out << " (point " << *r.convex.witness << " lies in the hull of the others)";
  out << '\n';
  out << "polytope dimension: " << r.polytope_dimension << '\n';
  out << "mixture bound: " << r.mixture_bound << '\n';
  out << "unrepresentable rankings: " << r.unrepresentable.size() << " of " << r.ranking_count;
  if (!unrep.empty()) out << " [" << unrep << "]";
  out << '\n';
  return out.str();
}

CensusReport run_census(const SpacePtr& space, int degree, std::size_t jobs) {
  if (degree < 1) throw UsageError("degree must be at least 1");
  CensusReport report;
  report.degree = degree;
  const auto c = census(degree, *space, jobs);
  for (const auto& r : c.representable) report.representable.push_back(r.label());
  for (const auto& r : c.unrepresentable) report.unrepresentable.push_back(r.label());
  return report;
}

std::string render(const CensusReport& r, Format format) {
  std::vector<std::pair<std::string, bool>> all;
  for (const auto& l : r.representable) all.emplace_back(l, true);
  for (const auto& l : r.unrepresentable) all.emplace_back(l, false);
  std::sort(all.begin(), all.end());
  std::ostringstream out;
  if (format == Format::Json) {
    nlohmann::json j{{"degree", r.degree}, {"representable", r.representable}, {"unrepresentable", r.unrepresentable}};
    return j.dump(2) + "\n";
  }
  if (format == Format::Csv) {
    out << "ranking,degree,representable\n";
    for (const auto& [label, rep] : all) out << label << ',' << r.degree << ',' << yes_no(rep) << '\n';
    return out.str();
  }
  out << "degree " << r.degree << ": " << r.unrepresentable.size() << " unrepresentable, " << r.representable.size()
      << " representable\n";
  out << "unrepresentable:";
  for (const auto& l : r.unrepresentable) out << ' ' << l;
  out << "\nrepresentable:";
  for (const auto& l : r.representable) out << ' ' << l;
  out << '\n';
  return out.str();
}

std::string render(const AdjacencyCertificate& c, const ChoiceSpace& space, Format format) {
  struct Item {
    std::string menu;
    std::string alternative;
    double value;
  };
  std::vector<Item> items;
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    const auto& menu = space.menus()[m];
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const double v = c.t[space.offset(m) + i];
      if (v != 0.0) items.push_back({space.menu_label(m), space.alternative(menu[i]).id, v});
    }
  }
  std::ostringstream out;
  if (format == Format::Json) {
    nlohmann::json j{{"ranking", c.ranking.label()},
                     {"reverse", reverse(c.ranking).label()},
                     {"level", c.level},
                     {"margin", c.margin}};
    auto& t = j["functional"] = nlohmann::json::array();
    for (const auto& it : items) t.push_back({{"menu", it.menu}, {"alternative", it.alternative}, {"value", it.value}});
    return j.dump(2) + "\n";
  }
  if (format == Format::Csv) {
    out << "menu,alternative,value\n";
    for (const auto& it : items) out << it.menu << ',' << it.alternative << ',' << number(it.value) << '\n';
    return out.str();
  }
  out << "edge " << c.ranking.label() << " -- " << reverse(c.ranking).label() << ": level " << number(c.level)
      << ", margin " << number(c.margin) << '\n';
  for (const auto& it : items)
    out << "  t(" << it.menu << ", " << it.alternative << ") = " << number(it.value) << '\n';
  return out.str();
}

std::string render(const FitReport& r, const ChoiceSpace& space, Format format) {
  if (format == Format::Json) return to_json(r) + "\n";
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "degree,engine,error,seed,iterations,eta\n"
        << r.degree << ',' << engine_name(r.engine) << ',' << number(r.error) << ',' << r.seed << ',' << r.iterations
        << ',' << join_eta(r.eta) << '\n';
    return out.str();
  }
  out << engine_name(r.engine) << " fit, degree " << r.degree << ": error " << number(r.error) << " ("
      << fixed3(r.error) << "), seed " << r.seed << ", " << r.iterations
      << (r.engine == Engine::Greedy ? " steps" : " sweeps") << '\n';
  out << "fixed effects:";
  for (std::size_t x = 0; x < r.eta.size(); ++x) out << ' ' << space.alternative(x).id << '=' << number(r.eta[x]);
  out << '\n' << "components: " << r.model.size() << '\n';
  if (r.engine == Engine::Greedy && !r.bound_trace.empty())
    out << "bound at final step: " << number(r.bound_trace.back()) << '\n';
  return out.str();
}

}  // namespace choiceapprox
