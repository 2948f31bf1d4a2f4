#pragma once

// JSON interchange documents:
//
//   { "format_version": "1.0",
//     "kind": "sign_matrix" | "embedding" | "realization" | "vector_system" | "protocol" | "report",
//     "payload": { ... kind-specific ... },
//     "provenance": { "command_line": "...", "seed": 0, "artifact_version": "..." } }
//
// Vectors are stored as lists (one list per alpha_x / beta_y), matrices as
// lists of rows. Reals are written in shortest round-trip form.

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>

#include "qfp/compiler.hpp"
#include "qfp/embeddings.hpp"
#include "qfp/rng.hpp"

namespace qfp::io {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1.0";
inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class DocumentKind { kSignMatrix, kEmbedding, kRealization, kVectorSystem, kProtocol, kReport };

std::string_view to_string(DocumentKind kind);
DocumentKind kind_from_string(std::string_view name);

struct Provenance {
  std::string command_line;
  Seed seed = 0;
  std::string artifact_version{kArtifactVersion};
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Document {
  std::string format_version{kFormatVersion};
  DocumentKind kind = DocumentKind::kReport;
  Json payload = Json::object();
  Provenance provenance;
};

/// Pretty-printed with a trailing newline; byte-stable for equal documents.
std::string serialize(const Document& doc);
/// Throws ParseError on malformed JSON or a missing/unknown envelope field.
Document parse_document(std::string_view text);

Document read_document(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// Throws ParseError unless doc.kind == expected.
void expect_kind(const Document& doc, DocumentKind expected);

Json to_payload(const SignMatrix& m);
Json to_payload(const ThresholdEmbedding& e);
Json to_payload(const Realization& r);
Json to_payload(const VectorSystem& v);
Json to_payload(const OneWayProtocol& p);
Json to_payload(const ClassicalSMPProtocol& p);

SignMatrix sign_matrix_from_payload(const Json& payload);
ThresholdEmbedding embedding_from_payload(const Json& payload);
Realization realization_from_payload(const Json& payload);
VectorSystem vector_system_from_payload(const Json& payload);

using AnyProtocol = std::variant<OneWayProtocol, ClassicalSMPProtocol>;
AnyProtocol protocol_from_payload(const Json& payload);

/// Alpha/beta vectors of an embedding or realization payload without the
/// unit-norm and threshold checks, for diagnosing broken files.
struct RawVectors {
  RealMatrix alphas;
  RealMatrix betas;
};
RawVectors raw_vectors_from_payload(const Json& payload);

Json matrix_rows(const RealMatrix& m);
RealMatrix matrix_from_rows(const Json& rows);
Json vector_list(const RealMatrix& columns);
RealMatrix columns_from_list(const Json& list);

}  // namespace qfp::io
