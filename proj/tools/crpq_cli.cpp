#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crpq/planner.hpp"
#include "crpq/width.hpp"

namespace {

using namespace crpq;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitCyclic = 2;
constexpr int kExitGuard = 3;

LabeledGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return load_graph(in);
}

Crpq load_query_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_query(buf.str());
}

Engine parse_engine(const std::string& name) {
  if (name == "optimal") return Engine::Optimal;
  if (name == "baseline") return Engine::Baseline;
  if (name == "oracle") return Engine::Oracle;
  throw CLI::ValidationError("--engine", "unknown engine: " + name);
}

void write_rows(const EvalReport& report, const LabeledGraph& g,
                std::ostream& out) {
  // map ids to external names, then sort lexicographically
  std::vector<std::vector<std::string>> named;
  named.reserve(report.rows.size());
  for (const Tuple& row : report.rows) {
    std::vector<std::string> r;
    for (VertexId v : row) r.push_back(g.vertex_name(v));
    named.push_back(std::move(r));
  }
  std::sort(named.begin(), named.end());
  for (const auto& r : named) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out << (i ? "\t" : "") << r[i];
    out << '\n';
  }
}

std::uint64_t total_rounds(const EvalReport& report) {
  return report.rounds.size();
}

int run_eval(const std::string& graph_path, const std::string& query_path,
             const std::string& engine_name, const std::string& out_path,
             bool /*parallel*/) {
  LabeledGraph g;
  Crpq q;
  try {
    g = load_graph_file(graph_path);
    q = load_query_file(query_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  Engine engine = parse_engine(engine_name);
  EvalReport report;
  try {
    report = evaluate(q, g, engine);
  } catch (const CyclicQueryError& e) {
    std::cerr << "error: query rejected as cyclic: " << e.what() << '\n';
    return kExitCyclic;
  } catch (const OracleGuardExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCyclic;
  }

  if (out_path.empty() || out_path == "-") {
    write_rows(report, g, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot open output file: " << out_path << '\n';
      return kExitParse;
    }
    write_rows(report, g, out);
  }
  std::cerr << "rows=" << report.rows.size()
            << " rounds=" << total_rounds(report)
            << " out_a=" << report.out_a
            << " product_edges=" << report.counters.product_edges
            << " worklist_pushes=" << report.counters.worklist_pushes
            << " base_restrictions=" << report.counters.base_restrictions
            << " compositions=" << report.counters.compositions
            << " propagations=" << report.counters.propagations << '\n';
  return kExitOk;
}

int run_analyze(const std::string& query_path, bool machine) {
  Crpq q;
  try {
    q = load_query_file(query_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  auto acyclic = check_acyclic(q);
  if (!acyclic.accepted) {
    std::cout << "acyclic: no (" << acyclic.reason << ")\n";
    if (machine) std::cout << "acyclic=0\n";
    return kExitOk;
  }
  WidthReport w = fn_fhtw(q);
  std::cout << "acyclic: yes\n";
  std::cout << "trivial: " << (w.trivial ? "yes" : "no") << '\n';
  std::cout << "components: " << w.components.size() << '\n';
  for (std::size_t i = 0; i < w.components.size(); ++i) {
    const auto& c = w.components[i];
    std::cout << "  component " << i + 1 << ": free={";
    for (std::size_t j = 0; j < c.query.free.size(); ++j)
      std::cout << (j ? "," : "") << q.var_names[c.query.free[j]];
    std::cout << "} atoms=" << c.query.atoms.size()
              << " rho_star=" << c.rho_star
              << (c.single_edge ? " (single-edge)" : "") << '\n';
  }
  std::cout << "fn-fhtw: " << w.fn_fhtw << '\n';
  std::cout << "predicted exponent: " << w.predicted_exponent << '\n';
  if (machine) {
    std::cout << "acyclic=1 trivial=" << (w.trivial ? 1 : 0)
              << " components=" << w.components.size()
              << " fn_fhtw=" << w.fn_fhtw
              << " exponent=" << w.predicted_exponent << '\n';
  }
  return kExitOk;
}

struct BenchRecord {
  std::size_t n;
  std::string engine;
  std::size_t rep;
  std::uint64_t wall_ns;
  std::size_t N;
  std::uint64_t out;
  std::uint64_t out_a;
  std::uint64_t rounds;
};

int run_bench(const std::string& family, std::vector<std::size_t> ns,
              std::vector<std::string> engines, std::size_t reps,
              const std::string& csv_path, std::uint64_t seed) {
  if (family != "star" && family != "random") {
    std::cerr << "error: unknown family: " << family << '\n';
    return kExitParse;
  }
  Crpq query = parse_query(star_query_text());
  std::vector<BenchRecord> records;
  for (std::size_t n : ns) {
    LabeledGraph g = family == "star"
                         ? gen_star_instance(n)
                         : gen_random(n, 4 * n, 3, seed);
    for (const std::string& engine_name : engines) {
      Engine engine = parse_engine(engine_name);
      for (std::size_t rep = 0; rep < reps; ++rep) {
        auto start = std::chrono::steady_clock::now();
        EvalReport report = evaluate(query, g, engine);
        auto stop = std::chrono::steady_clock::now();
        std::uint64_t ns_elapsed =
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start)
                .count();
        records.push_back({n, engine_name, rep, ns_elapsed, g.size(),
                           report.rows.size(), report.out_a,
                           total_rounds(report)});
        std::cerr << "n=" << n << " engine=" << engine_name << " rep=" << rep
                  << " wall_ns=" << ns_elapsed << '\n';
      }
    }
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!csv_path.empty() && csv_path != "-") {
    file.open(csv_path);
    if (!file) {
      std::cerr << "error: cannot open csv file: " << csv_path << '\n';
      return kExitParse;
    }
    out = &file;
  }
  *out << "n,engine,rep,wall_ns,N,OUT,OUT_a,rounds\n";
  for (const auto& r : records)
    *out << r.n << ',' << r.engine << ',' << r.rep << ',' << r.wall_ns << ','
         << r.N << ',' << r.out << ',' << r.out_a << ',' << r.rounds << '\n';

  // log-log least-squares slope over per-n medians (needs >= 3 reps)
  if (reps >= 3 && ns.size() >= 2) {
    for (const std::string& engine_name : engines) {
      std::vector<double> xs, ys;
      for (std::size_t n : ns) {
        std::vector<std::uint64_t> times;
        for (const auto& r : records)
          if (r.n == n && r.engine == engine_name) times.push_back(r.wall_ns);
        if (times.empty()) continue;
        std::sort(times.begin(), times.end());
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(static_cast<double>(times[times.size() / 2])));
      }
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      double m = xs.size();
      double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      std::cerr << "slope engine=" << engine_name << " " << slope << '\n';
    }
  }
  return kExitOk;
}

int run_gen(const std::string& family, std::size_t n, std::uint64_t seed,
            std::size_t ne, std::size_t alphabet, const std::string& out_path) {
  try {
    LabeledGraph g;
    if (family == "star") {
      g = gen_star_instance(n);
    } else if (family == "random") {
      g = gen_random(n, ne ? ne : 4 * n, alphabet, seed);
    } else {
      std::cerr << "error: unknown family: " << family << '\n';
      return kExitParse;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open: " + out_path);
    write_graph(g, out);
    if (family == "star") {
      std::ofstream qf(out_path + ".query");
      if (!qf) throw std::runtime_error("cannot open: " + out_path + ".query");
      qf << star_query_text();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output-sensitive evaluation of acyclic CRPQs"};
  app.require_subcommand(1);

  // eval
  std::string graph_path, query_path, engine_name = "optimal", out_path;
  bool parallel = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a query on a graph");
  eval->add_option("graph", graph_path, "graph TSV file")->required();
  eval->add_option("query", query_path, "query file")->required();
  eval->add_option("--engine", engine_name, "optimal|baseline|oracle");
  eval->add_option("--out", out_path, "output TSV path (default stdout)");
  eval->add_flag("--parallel", parallel, "enable component parallelism");

  // analyze
  std::string analyze_query;
  bool machine = false;
  auto* analyze = app.add_subcommand("analyze", "Width and structure report");
  analyze->add_option("query", analyze_query, "query file")->required();
  analyze->add_flag("--machine", machine, "also print a key=value record");

  // bench
  std::string family = "star", csv_path;
  std::vector<std::size_t> ns;
  std::vector<std::string> engines{"optimal", "baseline"};
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench", "Scaling benchmark");
  bench->add_option("--family", family, "star|random");
  bench->add_option("--n", ns, "instance sizes")->required();
  bench->add_option("--engines", engines, "engines to run");
  bench->add_option("--reps", reps, "repetitions per point");
  bench->add_option("--out", csv_path, "CSV output path (default stdout)");
  bench->add_option("--seed", seed, "random family seed");

  // gen
  std::string gen_family = "star", gen_out;
  std::size_t gen_n = 1, gen_ne = 0, gen_alphabet = 3;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Write a generated instance");
  gen->add_option("--family", gen_family, "star|random");
  gen->add_option("--n", gen_n, "size parameter")->required();
  gen->add_option("--seed", gen_seed, "random family seed");
  gen->add_option("--ne", gen_ne, "random family edge count (default 4n)");
  gen->add_option("--alphabet", gen_alphabet, "random family alphabet size");
  gen->add_option("--out", gen_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed())
      return run_eval(graph_path, query_path, engine_name, out_path, parallel);
    if (analyze->parsed()) return run_analyze(analyze_query, machine);
    if (bench->parsed())
      return run_bench(family, ns, engines, reps, csv_path, seed);
    if (gen->parsed())
      return run_gen(gen_family, gen_n, gen_seed, gen_ne, gen_alphabet,
                     gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitOk;
}
