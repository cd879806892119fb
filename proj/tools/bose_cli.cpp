// bose: batch runner for the ideal Bose gas experiments.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bose/dickman.hpp"
#include "bose/free_cells.hpp"
#include "bose/loops.hpp"
#include "bose/pareto_walk.hpp"
#include "bose/partition.hpp"
#include "bose/poisson_dirichlet.hpp"
#include "bose/rdm.hpp"
#include "bose/report.hpp"
#include "bose/selftest.hpp"
#include "bose/spectral_kernel.hpp"
#include "bose/thermo.hpp"
#include "bose/tilted.hpp"
#include "bose/trace_table.hpp"
#include "config.hpp"

namespace {

using namespace bose;
using bose::cli::ConfigError;

struct Options {
  std::string bc = "periodic";
  int d = 3;
  double beta = 1.0;
  double L = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  long N = 0;
  long n = 0;
  std::string n_seq;
  std::string list;  // rho / x / k lists, command specific
  std::string s_list;
  long samples = 0;
  std::uint64_t seed = 0;
  int shards = 8;
  int grid = 8;
  int grid_max = 64;
  int points = 64;
  int bootstrap = 1000;
  long R = 50;
  double eps = 0.1;
  double tol = 1e-13;
  bool bounds = false;
  bool eigen = false;
  std::string format;
  std::string out = "-";
  std::string config;
  bool selftest = false;
};

// Emits records as JSON lines, CSV, or bare values.
class Output {
 public:
  Output(std::ostream& os, std::string format) : os_(os), format_(std::move(format)), jl_(os) {}
  const std::string& format() const { return format_; }
  std::ostream& stream() { return os_; }

  void header(const json& h) {
    if (format_ == "json") jl_.write(h);
  }
  void record(const json& r) { jl_.write(r); }

  // Flattens an array of objects into a CSV table.
  void table(const json& rows) {
    if (!rows.is_array() || rows.empty()) return;
    std::vector<std::string> keys;
    flatten_keys(rows.front(), "", keys);
    CsvWriter w(os_, keys);
    for (const auto& row : rows) {
      std::vector<std::string> fields;
      for (const auto& k : keys) fields.push_back(cell(row, k));
      w.row(fields);
    }
  }

 private:
  static void flatten_keys(const json& obj, const std::string& prefix, std::vector<std::string>& keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it.value().is_object())
        flatten_keys(it.value(), prefix + it.key() + ".", keys);
      else
        keys.push_back(prefix + it.key());
    }
  }
  static std::string cell(const json& row, const std::string& key) {
    const json* v = &row;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, '.')) {
      if (!v->is_object() || !v->contains(part)) return {};
      v = &(*v)[part];
    }
    if (v->is_null()) return {};
    if (v->is_string()) return v->get<std::string>();
    if (v->is_boolean()) return v->get<bool>() ? "true" : "false";
    if (v->is_number_integer()) return std::to_string(v->get<long long>());
    if (v->is_number()) return format_double(v->get<double>());
    return v->dump();
  }

  std::ostream& os_;
  std::string format_;
  JsonLines jl_;
};

// Record tags first, then the body fields.
json tagged(json tags, const json& body) {
  tags.update(body);
  return tags;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  for (double v : parse_doubles(text)) {
    if (v != std::floor(v)) throw std::invalid_argument("not an integer: " + format_double(v));
    out.push_back(static_cast<long>(v));
  }
  return out;
}

template <class Parser>
CLI::Validator list_of(Parser parse, std::string name) {
  return CLI::Validator(
      [parse](std::string& s) -> std::string {
        try {
          parse(s);
        } catch (const std::exception& e) {
          return e.what();
        }
        return {};
      },
      std::move(name));
}

const CLI::Validator kBoundary = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        parse_boundary(s);
      } catch (const std::exception& e) {
        return e.what();
      }
      return {};
    },
    "BC");

const CLI::Validator kNSeq = list_of(bose::cli::parse_n_sequence, "N-SEQ");
const CLI::Validator kDoubles = list_of(parse_doubles, "LIST");
const CLI::Validator kLongs = list_of(parse_longs, "LIST");

struct Command {
  std::string name;
  std::string module;  // library module named in runtime diagnostics
  std::string suite;   // self-test suite
  std::string default_format;
  std::function<void(CLI::App&, Options&)> setup;
  std::function<void(const Options&, Output&)> run;
  std::vector<std::string> required;
};

// ------------------------------------------------------------------ option groups

void add_bc(CLI::App& a, Options& o) { a.add_option("--bc", o.bc, "boundary condition")->check(kBoundary); }
void add_d(CLI::App& a, Options& o) { a.add_option("--d", o.d, "dimension")->check(CLI::Range(1, 10)); }
void add_beta(CLI::App& a, Options& o) { a.add_option("--beta", o.beta, "inverse temperature")->check(CLI::PositiveNumber); }
void add_L(CLI::App& a, Options& o) { a.add_option("--L", o.L, "box side length")->check(CLI::PositiveNumber); }
void add_rho(CLI::App& a, Options& o) { a.add_option("--rho", o.rho, "particle density")->check(CLI::PositiveNumber); }
void add_N(CLI::App& a, Options& o) { a.add_option("--N", o.N, "particle number")->check(CLI::PositiveNumber); }
void add_nseq(CLI::App& a, Options& o) {
  a.add_option("--N-seq", o.n_seq, "strictly increasing N values, e.g. 128,256 or 2^7..2^13")->check(kNSeq);
}
void add_samples(CLI::App& a, Options& o) {
  a.add_option("--samples", o.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
}
void add_seed(CLI::App& a, Options& o) { a.add_option("--seed", o.seed, "RNG seed (required)"); }
void add_shards(CLI::App& a, Options& o) {
  a.add_option("--shards", o.shards, "independent RNG streams")->check(CLI::Range(1, 4096));
}
void add_grid(CLI::App& a, Options& o) {
  a.add_option("--grid", o.grid, "initial Nystrom grid per axis")->check(CLI::Range(8, 512));
  a.add_option("--grid-max", o.grid_max, "largest Nystrom grid per axis")->check(CLI::Range(8, 512));
}

BoxGeometry density_geometry(const Options& o, long N) { return geometry_for_density(o.d, o.rho, N, parse_boundary(o.bc)); }

// ------------------------------------------------------------------ commands

void run_traces(const Options& o, Output& out) {
  BoxGeometry g = make_geometry(o.d, o.L, parse_boundary(o.bc));
  TraceTable t = build_trace_table(g, o.beta, o.N, o.tol);
  if (out.format() == "text") {
    write_trace_table(out.stream(), t);
  } else {
    json rows = json::array();
    for (long k = 1; k <= t.n_max(); ++k)
      rows.push_back({{"k", k}, {"log_t", t.log_t[k - 1]}, {"err", t.err[k - 1]}});
    if (out.format() == "csv") {
      out.table(rows);
    } else {
      for (auto& r : rows) out.record(tagged({{"record", "trace"}}, r));
    }
  }
  if (o.bounds) {
    std::vector<long> ks;
    for (long k = 1; k <= o.N; k = std::max(k + 1, static_cast<long>(k * 1.5))) ks.push_back(k);
    KernelBoundsReport r = verify_kernel_bounds(g, o.beta, ks);
    if (out.format() == "csv")
      out.table(to_json(r)["rows"]);
    else
      out.record(tagged({{"record", "kernel_bounds"}}, to_json(r)));
  }
}

void run_partition(const Options& o, Output& out) {
  BoxGeometry g = make_geometry(o.d, o.L, parse_boundary(o.bc));
  PartitionTable p = build_partition_table(build_trace_table(g, o.beta, o.N), o.N);
  if (out.format() == "text") {
    out.stream() << format_double(std::exp(p.log_Z[o.N])) << '\n';
    return;
  }
  json rows = json::array();
  for (long n = 1; n <= o.N; ++n)
    rows.push_back({{"n", n}, {"log_Z", p.log_Z[n]}, {"Z", std::exp(p.log_Z[n])}, {"residual", p.residual[n]}});
  if (out.format() == "csv") {
    out.table(rows);
  } else {
    for (auto& r : rows) out.record(tagged({{"record", "partition"}}, r));
  }
}

void run_free_energy(const Options& o, Output& out) {
  json rows = json::array();
  for (double rho : parse_doubles(o.list)) {
    if (!(rho > 0.0)) throw std::domain_error("densities must be positive");
    double mu = chemical_potential(rho, o.beta, o.d);
    json r{{"rho", rho}, {"mu", mu}, {"pressure", pressure(mu, o.beta, o.d)}, {"free_energy", free_energy(rho, o.beta, o.d)}};
    if (o.N > 0) {
      BoxGeometry g = geometry_for_density(o.d, rho, o.N, parse_boundary(o.bc));
      PartitionTable p = build_partition_table(build_trace_table(g, o.beta, o.N), o.N);
      r["L"] = g.L;
      r["finite_volume_free_energy"] = finite_volume_free_energy(p, o.N);
    }
    rows.push_back(r);
  }
  if (out.format() == "csv") {
    out.table(rows);
  } else {
    for (auto& r : rows) out.record(tagged({{"record", "free_energy"}, {"rho_c", critical_density(o.d, o.beta)}}, r));
  }
}

void run_rdm_profile(const Options& o, Output& out) {
  BoxGeometry g = density_geometry(o, o.N);
  RdmKernel k(build_partition_table(build_trace_table(g, o.beta, o.N), o.N), o.N);
  auto profile = rdm_profile(k, o.points);
  if (out.format() == "csv") {
    CsvWriter w(out.stream(), {"r", "gamma"});
    for (const auto& p : profile) w.row({format_double(p.r), format_double(p.gamma)});
  } else {
    for (const auto& p : profile) out.record({{"record", "profile"}, {"r", p.r}, {"gamma", p.gamma}});
  }
  if (o.eigen) {
    EigenResult e = resolve_principal_eigenvalue(k, o.grid, o.grid_max);
    if (out.format() == "csv")
      out.table(json::array({to_json(e)}));
    else
      out.record(tagged({{"record", "eigenvalue"}, {"L", g.L}}, to_json(e)));
  }
}

void run_odlro(const Options& o, Output& out) {
  OdlroReport r = odlro_sweep(parse_boundary(o.bc), o.d, o.beta, o.rho, bose::cli::parse_n_sequence(o.n_seq), o.grid,
                              o.grid_max);
  if (out.format() == "csv")
    out.table(to_json(r)["rows"]);
  else
    out.record(tagged({{"record", "odlro_sweep"}}, to_json(r)));
}

void run_sample_loops(const Options& o, Output& out) {
  if (!o.n_seq.empty()) {
    ConcentrationReport r = concentration_experiment(parse_boundary(o.bc), o.d, o.beta, o.rho,
                                                     bose::cli::parse_n_sequence(o.n_seq), o.R, o.eps, o.samples,
                                                     o.seed, o.shards);
    if (out.format() == "csv")
      out.table(to_json(r)["rows"]);
    else
      out.record(tagged({{"record", "concentration"}}, to_json(r)));
    return;
  }
  if (o.N <= 0) throw std::invalid_argument("sample-loops needs --N or --N-seq");
  BoxGeometry g = density_geometry(o, o.N);
  PartitionTable p = build_partition_table(build_trace_table(g, o.beta, o.N), o.N);
  Rng rng(o.seed);
  std::unique_ptr<CsvWriter> csv;
  if (out.format() == "csv") csv = std::make_unique<CsvWriter>(out.stream(), std::vector<std::string>{"sample", "length", "count"});
  for (long i = 0; i < o.samples; ++i) {
    LoopConfiguration c = sample_conditioned(p, o.N, rng);
    if (csv) {
      for (auto [len, cnt] : c.counts) csv->row({std::to_string(i), std::to_string(len), std::to_string(cnt)});
    } else {
      out.record({{"record", "configuration"}, {"sample", i}, {"lengths", c.ordered_lengths()}});
    }
  }
}

void run_pd(const Options& o, Output& out) {
  PdReport r = pd_convergence_test(parse_boundary(o.bc), o.d, o.beta, o.rho, bose::cli::parse_n_sequence(o.n_seq),
                                   o.samples, o.seed, o.bootstrap, o.shards);
  if (out.format() == "csv")
    out.table(to_json(r)["rows"]);
  else
    out.record(tagged({{"record", "pd_test"}}, to_json(r)));
}

void run_lclt(const Options& o, Output& out) {
  ParetoWalkModel m(o.d);
  ParetoLcltReport r = o.list.empty() ? pareto_lclt_check(m, o.n) : pareto_lclt_check(m, o.n, parse_longs(o.list));
  if (out.format() == "csv")
    out.table(to_json(r)["rows"]);
  else
    out.record(tagged({{"record", "lclt"}}, to_json(r)));
}

void run_dickman(const Options& o, Output& out) {
  const auto& p = DickmanDensity::instance();
  json rows = json::array();
  if (!o.list.empty())
    for (double x : parse_doubles(o.list)) rows.push_back({{"x", x}, {"p", p(x)}});
  json lrows = json::array();
  if (!o.s_list.empty())
    for (double s : parse_doubles(o.s_list)) {
      if (s < 0.0) throw std::domain_error("Laplace variable must be >= 0");
      lrows.push_back({{"s", s}, {"laplace", p.laplace_transform(s)}});
    }
  if (rows.empty() && lrows.empty()) throw std::invalid_argument("dickman needs --x or --s");
  if (out.format() == "text") {
    for (const auto& r : rows) out.stream() << format_double(r["p"].get<double>()) << '\n';
    for (const auto& r : lrows) out.stream() << format_double(r["laplace"].get<double>()) << '\n';
  } else if (out.format() == "csv") {
    out.table(rows);
    out.table(lrows);
  } else {
    for (auto& r : rows) out.record(tagged({{"record", "dickman"}}, r));
    for (auto& r : lrows) out.record(tagged({{"record", "dickman_laplace"}}, r));
  }
}

void run_clt_tilted(const Options& o, Output& out) {
  BoxGeometry g = make_geometry(o.d, o.L, parse_boundary(o.bc));
  const long N = std::max(1L, std::lround(o.rho * g.volume()));
  TraceTable t = build_trace_table(g, o.beta, N);
  const double mu = o.mu < 0.0 ? o.mu : finite_volume_chemical_potential(t, o.rho, N);
  TiltedEnsemble e = tilted_rates(t, mu, N);
  LocalCltReport r = local_clt_check(e, o.samples, o.seed, o.shards);
  json j = to_json(r);
  j["mu"] = mu;
  j["N"] = N;
  if (out.format() == "csv")
    out.table(json::array({j}));
  else
    out.record(tagged({{"record", "clt_tilted"}}, j));
}

void run_free_cells(const Options& o, Output& out) {
  BoxGeometry g = make_geometry(o.d, o.L, Boundary::Free);
  FreeCellsReport r = free_bc_cell_counts(g, o.beta, o.seed, o.samples, o.shards);
  if (out.format() == "csv")
    out.table(to_json(r)["bins"]);
  else
    out.record(tagged({{"record", "free_cells"}}, to_json(r)));
}

std::vector<Command> commands() {
  auto fmt = [](CLI::App& a, Options& o) {
    a.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };
  return {
      {"traces", "trace_table", "kernel", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_L(a, o), add_N(a, o), fmt(a, o);
         a.add_option("--tol", o.tol, "relative trace tolerance")->check(CLI::PositiveNumber);
         a.add_flag("--bounds", o.bounds, "also verify the kernel envelope and trace bounds");
       },
       run_traces, {"L", "N"}},
      {"partition", "partition", "ensemble", "text",
       [=](CLI::App& a, Options& o) { add_bc(a, o), add_d(a, o), add_beta(a, o), add_L(a, o), add_N(a, o), fmt(a, o); },
       run_partition, {"L", "N"}},
      {"free-energy", "thermo", "thermo", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), fmt(a, o);
         a.add_option("--rho", o.list, "comma-separated densities")->check(kDoubles);
         a.add_option("--N", o.N, "also evaluate the finite-volume free energy at this N")->check(CLI::PositiveNumber);
       },
       run_free_energy, {"rho"}},
      {"rdm-profile", "rdm", "rdm", "csv",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_rho(a, o), add_N(a, o), add_grid(a, o), fmt(a, o);
         a.add_option("--points", o.points, "profile points on (0, L/2]")->check(CLI::Range(2, 100000));
         a.add_flag("--eigen", o.eigen, "also report the principal eigenvalue");
       },
       run_rdm_profile, {"rho", "N"}},
      {"odlro-sweep", "rdm", "rdm", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_rho(a, o), add_nseq(a, o), add_grid(a, o), fmt(a, o);
       },
       run_odlro, {"rho", "N-seq"}},
      {"sample-loops", "loops", "loops", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_rho(a, o), add_N(a, o), add_nseq(a, o), add_samples(a, o),
             add_seed(a, o), add_shards(a, o), fmt(a, o);
         a.add_option("--R", o.R, "short-loop cutoff for the concentration experiment")->check(CLI::PositiveNumber);
         a.add_option("--eps", o.eps, "concentration window")->check(CLI::PositiveNumber);
       },
       run_sample_loops, {"rho", "samples", "seed"}},
      {"pd-test", "poisson_dirichlet", "pd", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_rho(a, o), add_nseq(a, o), add_samples(a, o), add_seed(a, o),
             add_shards(a, o), fmt(a, o);
         a.add_option("--bootstrap", o.bootstrap, "bootstrap resamples")->check(CLI::Range(1, 1000000));
       },
       run_pd, {"rho", "N-seq", "samples", "seed"}},
      {"lclt", "pareto_walk", "pareto", "json",
       [=](CLI::App& a, Options& o) {
         add_d(a, o), fmt(a, o);
         a.add_option("--n", o.n, "number of steps")->check(CLI::PositiveNumber);
         a.add_option("--k", o.list, "comma-separated offsets from a n")->check(kLongs);
       },
       run_lclt, {"n"}},
      {"dickman", "dickman", "dickman", "text",
       [=](CLI::App& a, Options& o) {
         fmt(a, o);
         a.add_option("--x", o.list, "comma-separated arguments")->check(kDoubles);
         a.add_option("--s", o.s_list, "comma-separated Laplace variables")->check(kDoubles);
       },
       run_dickman, {}},
      {"clt-tilted", "tilted", "tilted", "json",
       [=](CLI::App& a, Options& o) {
         add_bc(a, o), add_d(a, o), add_beta(a, o), add_L(a, o), add_rho(a, o), add_samples(a, o), add_seed(a, o),
             add_shards(a, o), fmt(a, o);
         a.add_option("--mu", o.mu, "chemical potential (default: fitted to --rho)")->check(CLI::Range(-1e6, 0.0));
       },
       run_clt_tilted, {"L", "rho", "samples", "seed"}},
      {"free-cells", "free_cells", "free-cells", "json",
       [=](CLI::App& a, Options& o) {
         add_d(a, o), add_beta(a, o), add_L(a, o), add_samples(a, o), add_seed(a, o), add_shards(a, o), fmt(a, o);
       },
       run_free_cells, {"L", "samples", "seed"}},
  };
}

json header_record(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "selftest" || name == "out") continue;
    if (opt->count() > 0) {
      cfg[name] = opt->results().back();
    } else if (!opt->get_default_str().empty()) {
      cfg[name] = opt->get_default_str();
    }
  }
  return {{"record", "header"}, {"command", sub.get_name()}, {"config", cfg}};
}

int run_all_selftests(std::ostream& os) {
  int failures = 0;
  for (const auto& s : selftest_suites()) failures += run_selftest(s, os);
  os << (failures ? "FAIL" : "PASS") << " selftest: " << failures << " failing checks\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ideal Bose gas: heat-kernel traces, cycle ensembles and condensation diagnostics"};
  app.require_subcommand(0, 1);
  app.option_defaults()->always_capture_default();
  bool top_selftest = false;
  app.add_flag("--selftest", top_selftest, "run every self-test suite");

  Options opts;
  std::vector<Command> cmds = commands();
  std::vector<CLI::App*> subs;
  for (auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name);
    c.setup(*sub, opts);
    sub->add_option("--out", opts.out, "output path, - for stdout");
    sub->add_option("--config", opts.config, "key = value configuration file");
    sub->add_flag("--selftest", opts.selftest, "run this module's self-test suite");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (top_selftest) return run_all_selftests(std::cout);

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    CLI::App& sub = *subs[i];
    if (!sub.parsed()) continue;
    const Command& cmd = cmds[i];

    if (opts.selftest) {
      int f = run_selftest(cmd.suite, std::cout);
      std::cout << (f ? "FAIL" : "PASS") << " " << cmd.name << " selftest: " << f << " failing checks\n";
      return f ? 1 : 0;
    }

    try {
      if (!opts.config.empty()) bose::cli::apply_config(sub, bose::cli::read_config_file(opts.config), opts.config);
      for (const auto& field : cmd.required)
        if (sub.get_option("--" + field)->count() == 0)
          throw ConfigError(cmd.name + ": missing required field '" + field + "'" +
                            (field == "seed" ? " (there is no default seed)" : ""));
    } catch (const ConfigError& e) {
      std::cerr << "bose: config error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "bose: config error: " << e.what() << '\n';
      return 2;
    }

    std::ofstream file;
    if (opts.out != "-") {
      file.open(opts.out, std::ios::binary);
      if (!file) {
        std::cerr << "bose: cannot open output file " << opts.out << '\n';
        return 2;
      }
    }
    std::ostream& os = opts.out == "-" ? std::cout : file;
    Output out(os, opts.format.empty() ? cmd.default_format : opts.format);
    try {
      out.header(header_record(sub));
      cmd.run(opts, out);
    } catch (const TruncationError& e) {
      std::cerr << "bose " << cmd.name << ": " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "bose " << cmd.name << ": " << cmd.module << ": " << e.what() << '\n';
      return 1;
    }
    os.flush();
    return os ? 0 : 1;
  }
  std::cout << app.help();
  return 0;
}
