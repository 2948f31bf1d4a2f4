#include "qfp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfp/compiler.hpp"
#include "qfp/embeddings.hpp"
#include "qfp/fingerprint.hpp"
#include "qfp/io.hpp"
#include "qfp/margin.hpp"
#include "qfp/problems.hpp"
#include "qfp/projection.hpp"

namespace qfp::cli {
namespace {

using io::Document;
using io::DocumentKind;
using io::Json;

struct MatrixSource {
  std::string matrix_file;
  std::string builtin;
  int n = 2;
  int k = 2;
  int d = 1;
};

struct Common {
  Seed seed = 0;
  std::string out;
  std::string command_line;
};

void add_matrix_options(CLI::App* cmd, MatrixSource& src) {
  cmd->add_option("--matrix", src.matrix_file, "sign_matrix document");
  cmd->add_option("--builtin", src.builtin, "builtin problem: eq, ip or ham")
      ->check(CLI::IsMember({"eq", "ip", "ham"}));
  cmd->add_option("--n", src.n, "input bits for eq / ham");
  cmd->add_option("--k", src.k, "input bits for ip");
  cmd->add_option("--d", src.d, "distance threshold for ham");
}

void add_common_options(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "random seed (default 0)");
  cmd->add_option("--out", common.out, "write the document here instead of stdout");
}

// Accepts "0.25" as well as "1/3".
double parse_real(const std::string& text, const char* name) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse --") + name + " value '" + text + "'");
  }
}

SignMatrix load_matrix(const MatrixSource& src) {
  if (!src.matrix_file.empty()) {
    const auto doc = io::read_document(src.matrix_file);
    io::expect_kind(doc, DocumentKind::kSignMatrix);
    return io::sign_matrix_from_payload(doc.payload);
  }
  if (!src.builtin.empty()) return make_problem(src.builtin, src.n, src.k, src.d, false).matrix;
  throw ParseError("no sign matrix given (use --matrix FILE or --builtin NAME)");
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json pair_json(const std::optional<PairIndex>& p) {
  return p ? Json{{"x", p->x}, {"y", p->y}} : Json(nullptr);
}

void emit(const Common& common, DocumentKind kind, Json payload, std::ostream& out) {
  Document doc;
  doc.kind = kind;
  doc.payload = std::move(payload);
  doc.provenance.command_line = common.command_line;
  doc.provenance.seed = common.seed;
  const auto text = io::serialize(doc);
  if (common.out.empty()) {
    out << text;
  } else {
    io::write_text(common.out, text);
  }
}

// Protocol plus the matrix it is meant to compute.
struct LoadedProtocol {
  io::AnyProtocol protocol;
  SignMatrix matrix;
};

struct ProtocolSource {
  std::string protocol_file;
  bool one_way = false;
  std::string randomness = "full";
};

LoadedProtocol load_protocol(const ProtocolSource& ps, const MatrixSource& src, Seed seed) {
  if (!ps.protocol_file.empty()) {
    const auto doc = io::read_document(ps.protocol_file);
    io::expect_kind(doc, DocumentKind::kProtocol);
    auto protocol = io::protocol_from_payload(doc.payload);
    if (!src.matrix_file.empty() || !src.builtin.empty()) return {std::move(protocol), load_matrix(src)};
    if (!doc.payload.contains("sign_matrix")) {
      throw ParseError("protocol document has no sign_matrix; pass --matrix or --builtin");
    }
    return {std::move(protocol), io::sign_matrix_from_payload(doc.payload.at("sign_matrix"))};
  }
  if (src.builtin != "eq") throw ParseError("give --protocol FILE or --builtin eq");
  const auto set = ps.randomness == "sampled" ? RandomnessSet::kSampled : RandomnessSet::kFull;
  if (ps.one_way) return {eq_parity_one_way(src.n, set, seed), eq_matrix(src.n)};
  return {eq_parity_protocol(src.n, set, seed), eq_matrix(src.n)};
}

VectorSystem compile_any(const io::AnyProtocol& protocol) {
  return std::visit(
      [](const auto& p) -> VectorSystem {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, OneWayProtocol>) {
          return compile_one_way(p);
        } else {
          return compile_smp(p);
        }
      },
      protocol);
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  MatrixSource src;
  std::string what = "matrix";
  std::string randomness = "full";
};

int cmd_generate(const GenerateArgs& args, const Common& common, std::ostream& out) {
  if (args.src.builtin.empty()) throw ParseError("generate needs --builtin");
  if (args.what == "matrix") {
    emit(common, DocumentKind::kSignMatrix, io::to_payload(load_matrix(args.src)), out);
    return kOk;
  }
  if (args.src.builtin != "eq") throw ParseError("only the eq builtin has a protocol");
  const auto set = args.randomness == "sampled" ? RandomnessSet::kSampled : RandomnessSet::kFull;
  Json payload = args.what == "one-way-protocol"
                     ? io::to_payload(eq_parity_one_way(args.src.n, set, common.seed))
                     : io::to_payload(eq_parity_protocol(args.src.n, set, common.seed));
  payload["sign_matrix"] = io::to_payload(eq_matrix(args.src.n));
  emit(common, DocumentKind::kProtocol, std::move(payload), out);
  return kOk;
}

// ------------------------------------------------------------------ margin

struct MarginArgs {
  MatrixSource src;
  bool heuristic = false;
  bool no_spectral = false;
  Index dim = 0;
  int restarts = HeuristicConfig{}.restarts;
  int iterations = HeuristicConfig{}.iterations;
};

int cmd_margin(const MarginArgs& args, const Common& common, std::ostream& out) {
  const SignMatrix m = load_matrix(args.src);
  if (!args.no_spectral && !m.is_total()) {
    throw PreconditionError("spectral margin bounds need a total sign matrix; rerun with --no-spectral");
  }
  MarginReportOptions options;
  options.spectral = !args.no_spectral;
  const Index dim = args.dim > 0 ? args.dim : std::min(m.rows(), m.cols()) + 1;
  if (args.heuristic) {
    HeuristicRequest request;
    request.dimension = dim;
    request.seed = common.seed;
    request.config.restarts = args.restarts;
    request.config.iterations = args.iterations;
    options.heuristic = request;
  }
  const auto report = margin_report(m, options);
  emit(common, DocumentKind::kReport,
       {{"report_type", "margin"},
        {"rows", m.rows()},
        {"cols", m.cols()},
        {"total", m.is_total()},
        {"forster", optional_number(report.forster)},
        {"linial", optional_number(report.linial)},
        {"grothendieck_constant", kGrothendieck},
        {"upper", report.upper},
        {"upper_is_trivial", report.upper_is_trivial},
        {"heuristic_lower", optional_number(report.heuristic_lower)},
        {"heuristic_dimension", args.heuristic ? Json(dim) : Json(nullptr)},
        {"qent_lower_bits", report.qent_lower_bits},
        {"repetition_lower", report.repetition_lower},
        {"note", "qent_lower_bits and repetition_lower are asymptotic, constants omitted"}},
       out);
  return kOk;
}

// ----------------------------------------------------------------- compile

struct CompileArgs {
  ProtocolSource protocol;
  MatrixSource src;
  bool assemble = false;
  bool reduce = false;
  Index target_dim = 0;
  bool theorem_bound = false;
  std::string protocol_error = "1/3";
};

int cmd_compile(const CompileArgs& args, const Common& common, std::ostream& out) {
  const auto loaded = load_protocol(args.protocol, args.src, common.seed);
  const VectorSystem system = compile_any(loaded.protocol);
  const bool one_way = std::holds_alternative<OneWayProtocol>(loaded.protocol);
  const int message_bits = std::visit([](const auto& p) { return p.message_bits(); }, loaded.protocol);

  Json pipeline = {{"protocol_type", one_way ? "one_way" : "smp"},
                   {"message_bits", message_bits},
                   {"randomness_size", system.randomness_size()},
                   {"vector_dimension", system.dimension()},
                   {"norm_bound", system.norm_bound()}};
  if (!args.assemble && !args.reduce) {
    Json payload = io::to_payload(system);
    payload["pipeline"] = std::move(pipeline);
    emit(common, DocumentKind::kVectorSystem, std::move(payload), out);
    return kOk;
  }

  AssemblyOptions assembly;
  if (args.theorem_bound) {
    assembly.mode = ThresholdMode::kTheoremBound;
    assembly.protocol_error = parse_real(args.protocol_error, "protocol-error");
  }
  ThresholdEmbedding embedding = assemble_shared_randomness_states(system, loaded.matrix, assembly);
  pipeline["threshold_mode"] = args.theorem_bound ? "theorem_bound" : "exact";
  pipeline["assembled_dimension"] = embedding.dimension();
  pipeline["assembled_delta0"] = embedding.delta0();
  pipeline["assembled_delta1"] = embedding.delta1();
  pipeline["repetitions_exact_eps_1_3"] = required_repetitions(embedding.delta0(), embedding.delta1(), 1.0 / 3.0);
  pipeline["repetitions_asymptotic"] = {{"formula", "O(2^(2c))"},
                                        {"scale", std::ldexp(1.0, 2 * message_bits)}};
  if (args.reduce) {
    ReductionOptions reduction;
    if (args.target_dim > 0) reduction.target_dim = args.target_dim;
    const Index before = embedding.dimension();
    embedding = reduce_embedding_dimension(embedding, loaded.matrix, common.seed, reduction);
    pipeline["reduced_dimension"] = embedding.dimension();
    pipeline["reduced_delta0"] = embedding.delta0();
    pipeline["reduced_delta1"] = embedding.delta1();
    pipeline["reduction_applied"] = embedding.dimension() < before;
  }
  Json payload = io::to_payload(embedding);
  payload["pipeline"] = std::move(pipeline);
  payload["sign_matrix"] = io::to_payload(loaded.matrix);
  emit(common, DocumentKind::kEmbedding, std::move(payload), out);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string embedding_file;
  std::string realization_file;
  ProtocolSource protocol;
  MatrixSource src;
  std::string eps = "1/3";
  std::size_t trials = 200;
};

int cmd_simulate(const SimulateArgs& args, const Common& common, std::ostream& out) {
  const double eps = parse_real(args.eps, "eps");
  std::optional<FingerprintProtocol> protocol;
  std::optional<SignMatrix> matrix;
  std::string source;

  auto matrix_from = [&](const Document& doc) {
    if (!args.src.matrix_file.empty() || !args.src.builtin.empty()) return load_matrix(args.src);
    if (doc.payload.contains("sign_matrix")) return io::sign_matrix_from_payload(doc.payload.at("sign_matrix"));
    throw ParseError("no sign matrix given (use --matrix FILE or --builtin NAME)");
  };

  if (!args.embedding_file.empty()) {
    const auto doc = io::read_document(args.embedding_file);
    io::expect_kind(doc, DocumentKind::kEmbedding);
    matrix = matrix_from(doc);
    protocol = protocol_from_embedding(io::embedding_from_payload(doc.payload), eps);
    source = "embedding";
  } else if (!args.realization_file.empty()) {
    const auto doc = io::read_document(args.realization_file);
    io::expect_kind(doc, DocumentKind::kRealization);
    matrix = matrix_from(doc);
    protocol = protocol_from_margin(*matrix, io::realization_from_payload(doc.payload), eps);
    source = "realization";
  } else {
    const auto loaded = load_protocol(args.protocol, args.src, common.seed);
    matrix = loaded.matrix;
    const auto embedding = assemble_shared_randomness_states(compile_any(loaded.protocol), *matrix);
    protocol = protocol_from_embedding(embedding, eps);
    source = "protocol";
  }

  const auto run = run_protocol(*protocol, *matrix, args.trials, common.seed);
  const auto& e = protocol->embedding();
  emit(common, DocumentKind::kReport,
       {{"report_type", "simulation"},
        {"source", source},
        {"rows", matrix->rows()},
        {"cols", matrix->cols()},
        {"dimension", e.dimension()},
        {"delta0", e.delta0()},
        {"delta1", e.delta1()},
        {"theta", protocol->theta()},
        {"eps", eps},
        {"repetitions", protocol->repetitions()},
        {"qubits_per_copy", protocol->qubits_per_copy()},
        {"total_qubits", protocol->total_qubits()},
        {"trials", run.trials},
        {"max_error", run.max_error},
        {"per_pair_error", io::matrix_rows(run.per_pair_error)}},
       out);
  return kOk;
}

// ----------------------------------------------------------------- project

struct ProjectArgs {
  std::string vectors_file;
  Index random_count = 0;
  Index source_dim = 0;
  Index dim = 0;
  std::string eps = "0.2";
  bool identity = false;
};

RealMatrix load_vectors(const std::string& path) {
  const auto doc = io::read_document(path);
  if (doc.kind == DocumentKind::kEmbedding || doc.kind == DocumentKind::kRealization) {
    const auto raw = io::raw_vectors_from_payload(doc.payload);
    if (raw.alphas.rows() != raw.betas.rows()) throw DimensionError("alphas and betas differ in dimension");
    RealMatrix all(raw.alphas.rows(), raw.alphas.cols() + raw.betas.cols());
    all << raw.alphas, raw.betas;
    return all;
  }
  if (doc.kind == DocumentKind::kVectorSystem) {
    const auto system = io::vector_system_from_payload(doc.payload);
    const Index per_block = system.x_count() + system.y_count();
    RealMatrix all(system.dimension(), per_block * static_cast<Index>(system.randomness_size()));
    for (std::size_t r = 0; r < system.randomness_size(); ++r) {
      all.middleCols(per_block * static_cast<Index>(r), per_block) << system.a(r), system.b(r);
    }
    return all;
  }
  throw ParseError("project needs an embedding, realization or vector_system document");
}

int cmd_project(const ProjectArgs& args, const Common& common, std::ostream& out) {
  const double eps = parse_real(args.eps, "eps");
  RealMatrix vectors;
  if (!args.vectors_file.empty()) {
    vectors = load_vectors(args.vectors_file);
  } else if (args.random_count > 0 && args.source_dim > 0) {
    Rng rng(derive_seed(common.seed, 0));
    vectors.resize(args.source_dim, args.random_count);
    for (Index j = 0; j < vectors.cols(); ++j) {
      for (Index i = 0; i < vectors.rows(); ++i) vectors(i, j) = rng.normal();
      vectors.col(j).normalize();
    }
  } else {
    throw ParseError("give --vectors FILE or --random N --source-dim D");
  }

  const Index source_dim = vectors.rows();
  Index target = args.dim;
  if (args.identity) {
    target = source_dim;
  } else if (target <= 0) {
    target = static_cast<Index>(jl_dimension(static_cast<std::size_t>(vectors.cols()) + 1, eps));
  }
  if (target > source_dim) {
    throw PreconditionError("target dimension " + std::to_string(target) + " exceeds source dimension " +
                            std::to_string(source_dim));
  }
  const auto mode = args.identity ? ProjectionMode::kIdentity : ProjectionMode::kGaussian;
  const RealMatrix projected = project_vectors(vectors, target, derive_seed(common.seed, 1), mode);
  const auto report = verify_distortion(vectors, projected, eps);

  Json worst = nullptr;
  if (report.worst_pair) {
    auto label = [&](Index i) { return i == report.zero_index ? Json("zero") : Json(i); };
    worst = {{"first", label(report.worst_pair->first)}, {"second", label(report.worst_pair->second)}};
  }
  emit(common, DocumentKind::kReport,
       {{"report_type", "projection"},
        {"count", vectors.cols()},
        {"source_dim", source_dim},
        {"target_dim", target},
        {"mode", args.identity ? "identity" : "gaussian"},
        {"eps", eps},
        {"ok", report.ok},
        {"max_distortion", report.max_distortion},
        {"worst_pair", worst},
        {"pairs_checked", report.pairs_checked},
        {"max_inner_product_error", report.max_inner_product_error},
        {"inner_products_within_bound", report.inner_products_within_bound}},
       out);
  return kOk;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string embedding_file;
  std::string realization_file;
  MatrixSource src;
};

Json unit_norm_violations(const io::RawVectors& raw) {
  Json list = Json::array();
  auto scan = [&](const RealMatrix& vectors, const char* side) {
    for (Index i = 0; i < vectors.cols(); ++i) {
      const double norm = vectors.col(i).norm();
      if (std::abs(norm - 1.0) > kVerifyTolerance) list.push_back({{"side", side}, {"index", i}, {"norm", norm}});
    }
  };
  scan(raw.alphas, "alpha");
  scan(raw.betas, "beta");
  return list;
}

int cmd_verify(const VerifyArgs& args, const Common& common, std::ostream& out) {
  const bool is_embedding = !args.embedding_file.empty();
  if (is_embedding == !args.realization_file.empty()) {
    throw ParseError("give exactly one of --embedding FILE or --realization FILE");
  }
  const auto doc = io::read_document(is_embedding ? args.embedding_file : args.realization_file);
  io::expect_kind(doc, is_embedding ? DocumentKind::kEmbedding : DocumentKind::kRealization);
  SignMatrix m = [&] {
    if (!args.src.matrix_file.empty() || !args.src.builtin.empty()) return load_matrix(args.src);
    if (doc.payload.contains("sign_matrix")) return io::sign_matrix_from_payload(doc.payload.at("sign_matrix"));
    throw ParseError("no sign matrix given (use --matrix FILE or --builtin NAME)");
  }();
  const auto raw = io::raw_vectors_from_payload(doc.payload);
  const Json non_unit = unit_norm_violations(raw);

  Json payload = {{"report_type", "verify"},
                  {"object", is_embedding ? "embedding" : "realization"},
                  {"unit_norm_violations", non_unit}};
  bool valid = non_unit.empty();
  try {
    if (is_embedding) {
      const double delta0 = doc.payload.at("delta0").get<double>();
      const double delta1 = doc.payload.at("delta1").get<double>();
      const auto report = check_threshold_condition(raw.alphas, raw.betas, delta0, delta1, m);
      const bool ordered = 0.0 <= delta0 && delta0 < delta1 && delta1 <= 1.0;
      valid = valid && ordered && report.valid;
      payload["delta0"] = delta0;
      payload["delta1"] = delta1;
      payload["thresholds_ordered"] = ordered;
      payload["worst_zero_side"] = optional_number(report.worst_zero_side);
      payload["worst_one_side"] = optional_number(report.worst_one_side);
      payload["violation"] = pair_json(report.violation);
    } else {
      const double gamma = doc.payload.at("gamma").get<double>();
      const auto report = check_margin_condition(raw.alphas, raw.betas, gamma, m);
      valid = valid && report.valid && gamma > 0.0 && gamma <= 1.0;
      payload["gamma"] = gamma;
      payload["achieved_margin"] = report.achieved_margin;
      payload["worst_pair"] = pair_json(report.worst_pair);
      payload["violation"] = report.valid ? Json(nullptr) : pair_json(report.worst_pair);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("verify: ") + e.what());
  }
  payload["valid"] = valid;
  emit(common, DocumentKind::kReport, std::move(payload), out);
  return valid ? kOk : kMathError;
}

std::string join(const std::vector<std::string>& args) {
  std::string line;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) line += ' ';
    line += i == 0 ? std::string("qfp") : args[i];
  }
  return line;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum fingerprinting protocol simulator and margin toolkit", "qfp"};
  app.require_subcommand(1);

  Common common;
  common.command_line = join(args);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a builtin sign matrix or protocol document");
  add_matrix_options(generate, gen.src);
  generate->add_option("--what", gen.what, "matrix, protocol or one-way-protocol")
      ->check(CLI::IsMember({"matrix", "protocol", "one-way-protocol"}));
  generate->add_option("--randomness", gen.randomness, "full or sampled shared randomness")
      ->check(CLI::IsMember({"full", "sampled"}));
  add_common_options(generate, common);

  MarginArgs margin;
  auto* margin_cmd = app.add_subcommand("margin", "Margin upper bounds and a heuristic witness");
  add_matrix_options(margin_cmd, margin.src);
  margin_cmd->add_flag("--heuristic", margin.heuristic, "search for a large-margin realization");
  margin_cmd->add_flag("--no-spectral", margin.no_spectral, "skip the spectral bounds (promise matrices)");
  margin_cmd->add_option("--dim", margin.dim, "heuristic dimension (default min(rows, cols) + 1)");
  margin_cmd->add_option("--restarts", margin.restarts, "heuristic random restarts");
  margin_cmd->add_option("--iterations", margin.iterations, "heuristic iterations per restart");
  add_common_options(margin_cmd, common);

  CompileArgs compile;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a classical protocol into fingerprint states");
  compile_cmd->add_option("--protocol", compile.protocol.protocol_file, "protocol document");
  add_matrix_options(compile_cmd, compile.src);
  compile_cmd->add_flag("--one-way", compile.protocol.one_way, "use the one-way form of the builtin protocol");
  compile_cmd->add_option("--randomness", compile.protocol.randomness, "full or sampled")
      ->check(CLI::IsMember({"full", "sampled"}));
  compile_cmd->add_flag("--assemble", compile.assemble, "assemble unit fingerprint states");
  compile_cmd->add_flag("--reduce", compile.reduce, "reduce the dimension by random projection");
  compile_cmd->add_option("--target-dim", compile.target_dim, "override the projection target dimension");
  compile_cmd->add_flag("--theorem-bound", compile.theorem_bound, "thresholds from the protocol error bound");
  compile_cmd->add_option("--protocol-error", compile.protocol_error, "error bound for --theorem-bound");
  add_common_options(compile_cmd, common);

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo run of a repeated fingerprinting protocol");
  simulate_cmd->add_option("--embedding", simulate.embedding_file, "embedding document");
  simulate_cmd->add_option("--realization", simulate.realization_file, "realization document");
  simulate_cmd->add_option("--protocol", simulate.protocol.protocol_file, "protocol document");
  add_matrix_options(simulate_cmd, simulate.src);
  simulate_cmd->add_flag("--one-way", simulate.protocol.one_way, "use the one-way form of the builtin protocol");
  simulate_cmd->add_option("--eps", simulate.eps, "target error per pair (default 1/3)");
  simulate_cmd->add_option("--trials", simulate.trials, "executions per pair (default 200)");
  add_common_options(simulate_cmd, common);

  ProjectArgs project;
  auto* project_cmd = app.add_subcommand("project", "Random projection with a distortion report");
  project_cmd->add_option("--vectors", project.vectors_file, "embedding, realization or vector_system document");
  project_cmd->add_option("--random", project.random_count, "generate this many random unit vectors");
  project_cmd->add_option("--source-dim", project.source_dim, "dimension of the random vectors");
  project_cmd->add_option("--dim", project.dim, "target dimension (default from --eps)");
  project_cmd->add_option("--eps", project.eps, "distortion tolerance (default 0.2)");
  project_cmd->add_flag("--identity", project.identity, "identity map test mode");
  add_common_options(project_cmd, common);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check an embedding or realization against a sign matrix");
  verify_cmd->add_option("--embedding", verify.embedding_file, "embedding document");
  verify_cmd->add_option("--realization", verify.realization_file, "realization document");
  add_matrix_options(verify_cmd, verify.src);
  add_common_options(verify_cmd, common);

  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) storage.emplace_back("qfp");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, common, out);
    if (margin_cmd->parsed()) return cmd_margin(margin, common, out);
    if (compile_cmd->parsed()) return cmd_compile(compile, common, out);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate, common, out);
    if (project_cmd->parsed()) return cmd_project(project, common, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, common, out);
  } catch (const ParseError& e) {
    err << "qfp: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionError& e) {
    err << "qfp: shape error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "qfp: " << e.what() << '\n';
    return kMathError;
  } catch (const std::exception& e) {
    err << "qfp: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace qfp::cli
