#include "qfp/io.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

namespace qfp::io {
namespace {

constexpr std::array<std::pair<DocumentKind, std::string_view>, 6> kKindNames{{
    {DocumentKind::kSignMatrix, "sign_matrix"},
    {DocumentKind::kEmbedding, "embedding"},
    {DocumentKind::kRealization, "realization"},
    {DocumentKind::kVectorSystem, "vector_system"},
    {DocumentKind::kProtocol, "protocol"},
    {DocumentKind::kReport, "report"},
}};

// Runs `body`, rethrowing JSON library errors as ParseError.
template <typename F>
auto guarded(const char* what, F&& body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return object.at(name);
}

template <typename T>
std::vector<T> flat_table(const Json& nested, int depth) {
  std::vector<T> out;
  auto walk = [&](auto&& self, const Json& node, int level) -> void {
    if (!node.is_array()) throw ParseError("truth table nesting is malformed");
    for (const auto& child : node) {
      if (level + 1 == depth) {
        out.push_back(child.get<T>());
      } else {
        self(self, child, level + 1);
      }
    }
  };
  walk(walk, nested, 0);
  return out;
}

template <typename T>
Json nested_table(const std::vector<T>& flat, std::size_t outer, std::size_t inner) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < outer; ++i) {
    rows.push_back(std::vector<T>(flat.begin() + static_cast<std::ptrdiff_t>(i * inner),
                                  flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * inner)));
  }
  return rows;
}

}  // namespace

std::string_view to_string(DocumentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "report";
}

DocumentKind kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ParseError("unknown document kind '" + std::string(name) + "'");
}

std::string serialize(const Document& doc) {
  Json j;
  j["format_version"] = doc.format_version;
  j["kind"] = std::string(to_string(doc.kind));
  j["payload"] = doc.payload;
  j["provenance"] = {{"command_line", doc.provenance.command_line},
                     {"seed", doc.provenance.seed},
                     {"artifact_version", doc.provenance.artifact_version}};
  return j.dump(2) + "\n";
}

Document parse_document(std::string_view text) {
  return guarded("document", [&] {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    Document doc;
    doc.format_version = field(j, "format_version").get<std::string>();
    if (doc.format_version != kFormatVersion) {
      throw ParseError("unsupported format_version '" + doc.format_version + "'");
    }
    doc.kind = kind_from_string(field(j, "kind").get<std::string>());
    doc.payload = field(j, "payload");
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      doc.provenance.command_line = p.value("command_line", std::string{});
      doc.provenance.seed = p.value("seed", Seed{0});
      doc.provenance.artifact_version = p.value("artifact_version", std::string{});
    }
    return doc;
  });
}

Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

void expect_kind(const Document& doc, DocumentKind expected) {
  if (doc.kind != expected) {
    throw ParseError("expected a " + std::string(to_string(expected)) + " document, got " +
                     std::string(to_string(doc.kind)));
  }
}

Json matrix_rows(const RealMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix matrix_from_rows(const Json& rows) {
  return guarded("matrix", [&] {
    if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
      throw ParseError("matrix must be a non-empty list of rows");
    }
    const auto cols = rows.front().size();
    RealMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != cols) throw DimensionError("matrix rows differ in length");
      for (std::size_t j = 0; j < cols; ++j) {
        if (!rows[i][j].is_number()) throw ParseError("matrix entries must be numbers");
        m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j].get<double>();
      }
    }
    return m;
  });
}

Json vector_list(const RealMatrix& columns) { return matrix_rows(columns.transpose()); }

RealMatrix columns_from_list(const Json& list) { return matrix_from_rows(list).transpose(); }

Json to_payload(const SignMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

SignMatrix sign_matrix_from_payload(const Json& payload) {
  return guarded("sign_matrix", [&] {
    RealMatrix entries = matrix_from_rows(field(payload, "entries"));
    if (payload.contains("rows") && payload.at("rows").get<Index>() != entries.rows()) {
      throw DimensionError("sign_matrix: 'rows' disagrees with the entries");
    }
    if (payload.contains("cols") && payload.at("cols").get<Index>() != entries.cols()) {
      throw DimensionError("sign_matrix: 'cols' disagrees with the entries");
    }
    return SignMatrix(std::move(entries));
  });
}

Json to_payload(const ThresholdEmbedding& e) {
  return {{"dimension", e.dimension()},
          {"delta0", e.delta0()},
          {"delta1", e.delta1()},
          {"alphas", vector_list(e.alphas())},
          {"betas", vector_list(e.betas())}};
}

RawVectors raw_vectors_from_payload(const Json& payload) {
  return guarded("vectors", [&] {
    return RawVectors{columns_from_list(field(payload, "alphas")),
                      columns_from_list(field(payload, "betas"))};
  });
}

ThresholdEmbedding embedding_from_payload(const Json& payload) {
  return guarded("embedding", [&] {
    auto raw = raw_vectors_from_payload(payload);
    return ThresholdEmbedding(std::move(raw.alphas), std::move(raw.betas),
                              field(payload, "delta0").get<double>(),
                              field(payload, "delta1").get<double>());
  });
}

Json to_payload(const Realization& r) {
  return {{"dimension", r.dimension()},
          {"gamma", r.gamma()},
          {"alphas", vector_list(r.alphas())},
          {"betas", vector_list(r.betas())}};
}

Realization realization_from_payload(const Json& payload) {
  return guarded("realization", [&] {
    auto raw = raw_vectors_from_payload(payload);
    return Realization(std::move(raw.alphas), std::move(raw.betas), field(payload, "gamma").get<double>());
  });
}

Json to_payload(const VectorSystem& v) {
  Json blocks = Json::array();
  for (std::size_t r = 0; r < v.randomness_size(); ++r) {
    blocks.push_back({{"a", vector_list(v.a(r))}, {"b", vector_list(v.b(r))}});
  }
  return {{"norm_bound", v.norm_bound()}, {"dimension", v.dimension()}, {"blocks", blocks}};
}

VectorSystem vector_system_from_payload(const Json& payload) {
  return guarded("vector_system", [&] {
    std::vector<RealMatrix> a;
    std::vector<RealMatrix> b;
    for (const auto& block : field(payload, "blocks")) {
      a.push_back(columns_from_list(field(block, "a")));
      b.push_back(columns_from_list(field(block, "b")));
    }
    return VectorSystem(std::move(a), std::move(b), field(payload, "norm_bound").get<double>());
  });
}

Json to_payload(const OneWayProtocol& p) {
  const auto r = p.randomness_size();
  const auto n = static_cast<std::size_t>(p.inputs());
  const auto msgs = static_cast<std::size_t>(p.messages());
  Json bob = Json::array();
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<std::uint8_t> slice(p.bob_table().begin() + static_cast<std::ptrdiff_t>(i * n * msgs),
                                    p.bob_table().begin() + static_cast<std::ptrdiff_t>((i + 1) * n * msgs));
    bob.push_back(nested_table(slice, n, msgs));
  }
  return {{"type", "one_way"},
          {"input_bits", p.input_bits()},
          {"message_bits", p.message_bits()},
          {"random_strings", p.random_strings()},
          {"alice_messages", nested_table(p.alice_table(), r, n)},
          {"bob_accept", bob}};
}

Json to_payload(const ClassicalSMPProtocol& p) {
  const auto r = p.randomness_size();
  const auto n = static_cast<std::size_t>(p.inputs());
  const auto msgs = static_cast<std::size_t>(p.messages());
  return {{"type", "smp"},
          {"input_bits", p.input_bits()},
          {"message_bits", p.message_bits()},
          {"random_strings", p.random_strings()},
          {"alice_messages", nested_table(p.alice_table(), r, n)},
          {"bob_messages", nested_table(p.bob_table(), r, n)},
          {"referee_accept", nested_table(p.referee_table(), msgs, msgs)}};
}

AnyProtocol protocol_from_payload(const Json& payload) {
  return guarded("protocol", [&]() -> AnyProtocol {
    const auto type = field(payload, "type").get<std::string>();
    const int n = field(payload, "input_bits").get<int>();
    const int c = field(payload, "message_bits").get<int>();
    auto strings = field(payload, "random_strings").get<std::vector<std::uint64_t>>();
    auto alice = flat_table<std::uint32_t>(field(payload, "alice_messages"), 2);
    if (type == "one_way") {
      return OneWayProtocol(n, c, std::move(strings), std::move(alice),
                            flat_table<std::uint8_t>(field(payload, "bob_accept"), 3));
    }
    if (type == "smp") {
      return ClassicalSMPProtocol(n, c, std::move(strings), std::move(alice),
                                  flat_table<std::uint32_t>(field(payload, "bob_messages"), 2),
                                  flat_table<std::uint8_t>(field(payload, "referee_accept"), 2));
    }
    throw ParseError("protocol type must be 'one_way' or 'smp', got '" + type + "'");
  });
}

}  // namespace qfp::io
