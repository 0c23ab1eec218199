#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pinner/certify.hpp"
#include "pinner/coefseq.hpp"
#include "pinner/constructions.hpp"
#include "pinner/inner.hpp"
#include "pinner/solver.hpp"
#include "pinner/sparse_poly.hpp"
#include "pinner/zero_spec.hpp"

namespace pinner {

// JSON encodings, one per value type:
//   CoefSeq       array of [re, im] pairs, index = exponent
//   SparsePoly    object, decimal exponent string -> [re, im]
//   ZeroSetSpec   {"zeros": [{"re":.., "im":.., "mult":..}]}
// Result structs serialize field-by-field with enum fields as their
// display names. The from_json side throws nlohmann's type/parse errors
// untouched; semantic validation (zeros inside the disk and so on) stays
// with the owning module.
void to_json(nlohmann::json& j, const CoefSeq& a);
void from_json(const nlohmann::json& j, CoefSeq& a);

void to_json(nlohmann::json& j, const SparsePoly& a);
void from_json(const nlohmann::json& j, SparsePoly& a);

void to_json(nlohmann::json& j, const ZeroSetSpec& spec);
void from_json(const nlohmann::json& j, ZeroSetSpec& spec);

void to_json(nlohmann::json& j, const ProjectionResult& r);
void to_json(nlohmann::json& j, const InnerResult& r);
void to_json(nlohmann::json& j, const CertificateSequence& c);
void to_json(nlohmann::json& j, const FamilyOutput& f);

/// Parses the file as JSON. File and parse failures surface as
/// std::runtime_error with the path in the message.
nlohmann::json load_json_file(const std::string& path);

/// Pretty-prints doc to path with a trailing newline. with_timestamp adds
/// a top-level "timestamp" field (UTC, ISO 8601) first; everything else
/// about the output is a pure function of doc, so repeated runs differ in
/// that field alone.
void write_json_file(const std::string& path, nlohmann::json doc, bool with_timestamp = true);

/// Shortest decimal form that parses back to exactly v (17 significant
/// digits at most). Used for every numeric CSV cell.
std::string format_double(double v);

/// Comma-delimited table with one header row, '.' as the decimal mark.
/// All columns must share one length. Throws std::invalid_argument on
/// ragged input, std::runtime_error if the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Certificate table with columns (n, j_norm, phi_norm, bound). bounds may
/// be empty (column written as nan) or match prefix_norms in length.
/// Extra diagnostic columns are appended after the core four.
void write_certificate_csv(const std::string& path, const CertificateSequence& c,
                           const std::vector<double>& bounds,
                           const std::vector<std::string>& extra_header = {},
                           const std::vector<std::vector<double>>& extra_columns = {});

/// Root-circle summary with columns (level, modulus, count, spacing),
/// one row per targeted level, level counting from 1.
void write_roots_csv(const std::string& path, const std::vector<RootCircle>& roots);

}  // namespace pinner
