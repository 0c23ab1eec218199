#include "pinner/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pinner {

namespace {

nlohmann::json pair_of(Cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

Cplx pair_from(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw nlohmann::json::type_error::create(302, "complex value must be a [re, im] pair", &j);
    return Cplx(j[0].get<double>(), j[1].get<double>());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void to_json(nlohmann::json& j, const CoefSeq& a) {
    j = nlohmann::json::array();
    for (const Cplx& z : a.c) j.push_back(pair_of(z));
}

void from_json(const nlohmann::json& j, CoefSeq& a) {
    std::vector<Cplx> c;
    c.reserve(j.size());
    for (const auto& el : j) c.push_back(pair_from(el));
    a = CoefSeq(std::move(c));
}

void to_json(nlohmann::json& j, const SparsePoly& a) {
    j = nlohmann::json::object();
    for (const auto& [e, c] : a.terms()) j[std::to_string(e)] = pair_of(c);
}

void from_json(const nlohmann::json& j, SparsePoly& a) {
    a = SparsePoly();
    for (const auto& [key, val] : j.items()) {
        std::uint64_t e = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), e);
        if (res.ec != std::errc{} || res.ptr != key.data() + key.size())
            throw nlohmann::json::type_error::create(
                302, "exponent key is not a decimal integer: " + key, &j);
        a.add_term(e, pair_from(val));
    }
}

void to_json(nlohmann::json& j, const ZeroSetSpec& spec) {
    auto zeros = nlohmann::json::array();
    for (const ZeroEntry& z : spec.entries())
        zeros.push_back({{"re", z.w.real()}, {"im", z.w.imag()}, {"mult", z.mult}});
    j = nlohmann::json{{"zeros", std::move(zeros)}};
}

void from_json(const nlohmann::json& j, ZeroSetSpec& spec) {
    spec = ZeroSetSpec();
    for (const auto& el : j.at("zeros")) {
        const Cplx w(el.at("re").get<double>(), el.at("im").get<double>());
        spec.add(w, el.value("mult", 1u));
    }
}

void to_json(nlohmann::json& j, const ProjectionResult& r) {
    j = nlohmann::json{{"co_projection", r.co_projection},
                       {"multiplier_poly", r.multiplier_poly},
                       {"norm", r.norm},
                       {"grad_norm", r.grad_norm},
                       {"iterations", r.iterations},
                       {"truncation_degree", r.truncation_degree}};
}

void to_json(nlohmann::json& j, const InnerResult& r) {
    j = nlohmann::json{{"J", r.J},
                       {"norm", r.norm},
                       {"orth_residuals", r.orth_residuals},
                       {"method", method_name(r.method)},
                       {"iterations", r.iterations},
                       {"warnings", r.warnings}};
}

void to_json(nlohmann::json& j, const CertificateSequence& c) {
    j = nlohmann::json{{"prefix_norms", c.prefix_norms},
                       {"phi_norms", c.phi_norms},
                       {"verdict", verdict_name(c.verdict)},
                       {"notes", c.notes}};
}

void to_json(nlohmann::json& j, const FamilyOutput& f) {
    auto roots = nlohmann::json::array();
    for (const RootCircle& rc : f.targeted_roots)
        roots.push_back({{"modulus", rc.modulus},
                         {"count", rc.count},
                         {"angular_spacing", rc.angular_spacing},
                         {"log_modulus", rc.log_modulus}});
    std::vector<std::size_t> factor_terms;
    factor_terms.reserve(f.factors.size());
    for (const SparsePoly& fac : f.factors) factor_terms.push_back(fac.term_count());
    j = nlohmann::json{{"r_values", f.r_values},
                       {"exact_norm", f.exact_norm},
                       {"bound_product", f.bound_product},
                       {"blaschke_partials", f.blaschke_partials},
                       {"factor_term_counts", std::move(factor_terms)},
                       {"product_term_count", f.product.term_count()},
                       {"product_max_exponent", f.product.max_exponent()},
                       {"targeted_roots", std::move(roots)}};
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
}

void write_json_file(const std::string& path, nlohmann::json doc, bool with_timestamp) {
    if (with_timestamp) doc["timestamp"] = utc_timestamp();
    auto out = open_for_write(path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header and column counts differ");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");

    auto out = open_for_write(path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << format_double(columns[i][r]) << (i + 1 < columns.size() ? ',' : '\n');
    if (!out) throw std::runtime_error("failed writing " + path);
}

void write_certificate_csv(const std::string& path, const CertificateSequence& c,
                           const std::vector<double>& bounds,
                           const std::vector<std::string>& extra_header,
                           const std::vector<std::vector<double>>& extra_columns) {
    const std::size_t n = c.prefix_norms.size();
    std::vector<double> index(n);
    for (std::size_t i = 0; i < n; ++i) index[i] = static_cast<double>(i + 1);
    std::vector<double> bound_col =
        bounds.empty() ? std::vector<double>(n, std::nan("")) : bounds;

    std::vector<std::string> header{"n", "j_norm", "phi_norm", "bound"};
    std::vector<std::vector<double>> cols{std::move(index), c.prefix_norms, c.phi_norms,
                                          std::move(bound_col)};
    header.insert(header.end(), extra_header.begin(), extra_header.end());
    cols.insert(cols.end(), extra_columns.begin(), extra_columns.end());
    write_csv(path, header, cols);
}

void write_roots_csv(const std::string& path, const std::vector<RootCircle>& roots) {
    std::vector<std::vector<double>> cols(4);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        cols[0].push_back(static_cast<double>(i + 1));
        cols[1].push_back(roots[i].modulus);
        cols[2].push_back(static_cast<double>(roots[i].count));
        cols[3].push_back(roots[i].angular_spacing);
    }
    write_csv(path, {"level", "modulus", "count", "spacing"}, cols);
}

}  // namespace pinner
