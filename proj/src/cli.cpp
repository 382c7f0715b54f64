#include "cpb/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "cpb/bridge.hpp"
#include "cpb/condensate.hpp"
#include "cpb/effective.hpp"
#include "cpb/emit.hpp"
#include "cpb/errors.hpp"
#include "cpb/two_mode.hpp"

namespace cpb::cli {

namespace {

struct Flags {
  // two-mode
  double ec = 1.0;
  double u = 0.0;
  double lambda = 0.0;
  std::size_t n = 1;
  double nbar1 = 0.0;
  // effective
  double ej = 0.0;
  double ng = 0.0;
  std::size_t n_max = 0;
  double ng_start = 0.0;
  double ng_stop = 0.0;
  std::size_t ng_steps = 1;
  // condensate
  double n1 = 0.0;
  double delta_n = 0.0;
  double delta_start = 0.0;
  double delta_stop = 0.0;
  std::size_t delta_steps = 1;
  std::vector<double> thresholds;

  std::size_t levels = 1;
  std::string format = "csv";
  std::string output = "-";
};

std::vector<double> linear_grid(double start, double stop, std::size_t steps) {
  if (steps < 1) throw InvalidParams("grid needs at least one step");
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = steps == 1 ? start
                         : start + (stop - start) * static_cast<double>(i) /
                                       static_cast<double>(steps - 1);
  }
  return grid;
}

Cell num(double x) { return x; }
Cell idx(std::size_t i) { return static_cast<std::int64_t>(i); }

TwoModeParams two_mode_params(const Flags& f, std::ostream& err) {
  TwoModeParams p{f.ec, f.u, f.lambda, f.n, f.nbar1};
  for (const auto& w : validate(p)) err << "warning: " << w << '\n';
  return p;
}

EffectiveParams effective_params(const Flags& f, bool has_n_max) {
  EffectiveParams p{f.ec, f.ej, f.ng, std::nullopt};
  if (has_n_max) p.n_max = f.n_max;
  return p;
}

Document spectrum_document(const Spectrum& s) {
  Document doc;
  doc.table.columns = {"level", "energy"};
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    doc.table.rows.push_back({idx(i), num(s.eigenvalues[i])});
  }
  return doc;
}

Table gap_table(const std::vector<GapRow>& rows) {
  Table t;
  t.columns = {"level", "gap_two_mode", "gap_effective", "rel_discrepancy"};
  for (const auto& r : rows) {
    t.rows.push_back({idx(r.level), num(r.gap_two_mode), num(r.gap_effective), num(r.rel_discrepancy)});
  }
  return t;
}

void write_document(const std::string& text, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    if (!out) throw IOFailure("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IOFailure("cannot open output file " + path);
  file << text;
  file.flush();
  if (!file) throw IOFailure("failed writing output file " + path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cooper-pair-box qubit models: two-mode sector, charge-basis effective model, "
               "condensate overlaps",
               "cpb"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", f.output, "Output path, - for stdout");
  };
  auto add_two_mode = [&](CLI::App* sub) {
    sub->add_option("--ec", f.ec, "Charging energy E_C")->required();
    sub->add_option("--u", f.u, "Bias potential U")->required();
    sub->add_option("--lambda", f.lambda, "Tunneling amplitude")->required();
    sub->add_option("--n", f.n, "Total number of pairs N")->required();
    sub->add_option("--nbar1", f.nbar1, "Background island occupation")->required();
  };

  auto* two_mode = app.add_subcommand("two-mode-spectrum", "Lowest levels of the fixed-N sector");
  add_two_mode(two_mode);
  two_mode->add_option("--levels", f.levels, "Number of levels")->required();
  add_common(two_mode);

  CLI::Option* n_max_opt = nullptr;
  CLI::Option* sweep_n_max_opt = nullptr;
  auto* eff = app.add_subcommand("effective-spectrum", "Lowest levels of the charge-basis model");
  eff->add_option("--ec", f.ec, "Charging energy E_C")->required();
  eff->add_option("--ej", f.ej, "Josephson energy E_J")->required();
  eff->add_option("--ng", f.ng, "Gate charge n_g")->required();
  n_max_opt = eff->add_option("--n-max", f.n_max, "Charge cutoff (default: automatic)");
  eff->add_option("--levels", f.levels, "Number of levels")->required();
  add_common(eff);

  auto* sweep = app.add_subcommand("sweep-ng", "Charge dispersion over a gate-charge grid");
  sweep->add_option("--ec", f.ec, "Charging energy E_C")->required();
  sweep->add_option("--ej", f.ej, "Josephson energy E_J")->required();
  sweep_n_max_opt = sweep->add_option("--n-max", f.n_max, "Charge cutoff (default: automatic)");
  sweep->add_option("--ng-start", f.ng_start, "First gate charge")->required();
  sweep->add_option("--ng-stop", f.ng_stop, "Last gate charge")->required();
  sweep->add_option("--ng-steps", f.ng_steps, "Number of grid points")->required();
  sweep->add_option("--levels", f.levels, "Levels per row")->required();
  add_common(sweep);

  auto* overlap = app.add_subcommand("overlap", "Exact and asymptotic condensate overlap");
  overlap->add_option("--n", f.n, "Total number of pairs N")->required();
  overlap->add_option("--n1", f.n1, "Pairs on the island N1")->required();
  overlap->add_option("--delta-n", f.delta_n, "Charge separation")->required();
  add_common(overlap);

  auto* cone = app.add_subcommand("cone-scan", "Overlap versus charge separation");
  cone->add_option("--n", f.n, "Total number of pairs N")->required();
  cone->add_option("--n1", f.n1, "Pairs on the island N1")->required();
  cone->add_option("--delta-start", f.delta_start, "First charge separation");
  cone->add_option("--delta-stop", f.delta_stop, "Last charge separation")->required();
  cone->add_option("--delta-steps", f.delta_steps, "Number of grid points")->required();
  cone->add_option("--thresholds", f.thresholds, "Overlap thresholds in (0,1)")->delimiter(',');
  add_common(cone);

  auto* compare = app.add_subcommand("compare", "Excitation gaps of both models side by side");
  add_two_mode(compare);
  compare->add_option("--levels", f.levels, "Number of gaps")->required();
  add_common(compare);

  auto* pipeline = app.add_subcommand("pipeline", "Qubit pair, charge separation and overlaps");
  add_two_mode(pipeline);
  pipeline->add_option("--n1", f.n1, "Island pair count for the overlap")->required();
  std::size_t pipeline_levels = 3;
  pipeline->add_option("--levels", pipeline_levels, "Rows in the gap table");
  add_common(pipeline);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Document doc;
    if (two_mode->parsed()) {
      doc = spectrum_document(two_mode_spectrum(two_mode_params(f, err), f.levels));
    } else if (eff->parsed()) {
      doc = spectrum_document(effective_spectrum(effective_params(f, n_max_opt->count() > 0), f.levels));
    } else if (sweep->parsed()) {
      const auto grid = linear_grid(f.ng_start, f.ng_stop, f.ng_steps);
      const auto rows = charge_dispersion_sweep(effective_params(f, sweep_n_max_opt->count() > 0), grid, f.levels);
      doc.table.columns = {"ng"};
      for (std::size_t j = 0; j < f.levels; ++j) doc.table.columns.push_back("e" + std::to_string(j));
      for (const auto& r : rows) {
        std::vector<Cell> row{num(r.n_g)};
        for (double e : r.energies) row.push_back(num(e));
        doc.table.rows.push_back(std::move(row));
      }
    } else if (overlap->parsed()) {
      const CondensateConfig cfg{f.n, f.n1, f.delta_n};
      const auto exact = overlap_exact(cfg);
      const auto asym = overlap_asymptotic(cfg);
      doc.single_record = true;
      doc.table.columns = {"exact", "log_exact", "asymptotic", "linearized", "single_particle_overlap"};
      doc.table.rows.push_back({num(exact.overlap), num(exact.log_overlap), num(asym.overlap),
                                num(asym.linearized), num(single_particle_overlap(cfg))});
    } else if (cone->parsed()) {
      const auto grid = linear_grid(f.delta_start, f.delta_stop, f.delta_steps);
      const auto scan = cone_scan(f.n, f.n1, grid, f.thresholds);
      doc.table.columns = {"delta_n", "overlap_exact", "overlap_asymptotic"};
      for (const auto& r : scan.rows) {
        doc.table.rows.push_back({num(r.delta_n), num(r.overlap_exact), num(r.overlap_asymptotic)});
      }
      Annex crossings{"thresholds", {{"threshold", "delta_n"}, {}}};
      for (const auto& c : scan.crossings) {
        crossings.table.rows.push_back({num(c.threshold), c.delta_n ? num(*c.delta_n) : Cell{}});
      }
      if (!scan.crossings.empty()) doc.annexes.push_back(std::move(crossings));
    } else if (compare->parsed()) {
      doc.table = gap_table(compare_spectra(two_mode_params(f, err), f.levels));
    } else if (pipeline->parsed()) {
      const auto r = contrast_pipeline(two_mode_params(f, err), f.n1, pipeline_levels);
      doc.single_record = true;
      doc.table.columns = {"e_j", "n_g", "effective_overlap", "delta_n", "charge_expectation_gap",
                           "n1_for_overlap", "condensate_overlap_exact", "condensate_log_overlap",
                           "condensate_overlap_asymptotic"};
      doc.table.rows.push_back({num(r.e_j), num(r.n_g), num(r.effective_overlap), num(r.delta_n),
                                num(r.charge_expectation_gap), num(r.n1_for_overlap),
                                num(r.condensate_overlap_exact), num(r.condensate_log_overlap),
                                num(r.condensate_overlap_asymptotic)});
      doc.annexes.push_back({"gap_table", gap_table(r.gap_table)});
    }
    write_document(render(doc, f.format == "json" ? Format::json : Format::csv), f.output, out);
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const IOFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIO;
  }
}

}  // namespace cpb::cli
