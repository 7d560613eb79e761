#include "basket/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace basket {

namespace {

Vector vector_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(field, "expected an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json vector_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* to_string(FocalityVerdict v) {
    switch (v) {
        case FocalityVerdict::non_focal: return "non_focal";
        case FocalityVerdict::near_focal: return "near_focal";
        case FocalityVerdict::focal: return "focal";
    }
    return "unknown";
}

const char* to_string(Regime r) {
    return r == Regime::degenerate ? "degenerate" : "generic";
}

const char* to_string(DensityMethod m) {
    switch (m) {
        case DensityMethod::quadrature: return "quadrature";
        case DensityMethod::laplace: return "laplace";
        case DensityMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

json spec_to_json(const BasketSpec& spec) {
    json j;
    j["d"] = spec.d();
    j["spots"] = vector_to_json(spec.spots());
    j["vols"] = vector_to_json(spec.vols());
    j["corr"] = matrix_to_json(spec.corr());
    j["rate"] = spec.rate();
    j["weights"] = vector_to_json(spec.weights());
    j["maturity"] = spec.maturity();
    return j;
}

BasketSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("spec", "expected a JSON object");
    if (!j.contains("spots")) throw ConfigError("spots", "missing");
    if (!j.contains("vols")) throw ConfigError("vols", "missing");

    Vector spots = vector_from_json(j["spots"], "spots");
    Vector vols = vector_from_json(j["vols"], "vols");
    const auto d = spots.size();

    if (j.contains("d") && j["d"].get<long>() != d)
        throw ConfigError("d", "inconsistent with spots length");

    Matrix corr = Matrix::Identity(d, d);
    if (j.contains("corr")) {
        const json& jc = j["corr"];
        if (!jc.is_array() || static_cast<Eigen::Index>(jc.size()) != d)
            throw ConfigError("corr", "expected a d x d row-major array");
        for (Eigen::Index i = 0; i < d; ++i) {
            Vector row = vector_from_json(jc[static_cast<std::size_t>(i)], "corr");
            if (row.size() != d) throw ConfigError("corr", "expected a d x d row-major array");
            corr.row(i) = row;
        }
    }
    double rate = 0.0;
    if (j.contains("rate")) {
        if (!j["rate"].is_number()) throw ConfigError("rate", "expected a number");
        rate = j["rate"].get<double>();
    }
    Vector weights;
    if (j.contains("weights")) weights = vector_from_json(j["weights"], "weights");
    double maturity = 1.0;
    if (j.contains("maturity")) {
        if (!j["maturity"].is_number()) throw ConfigError("maturity", "expected a number");
        maturity = j["maturity"].get<double>();
    }
    try {
        return BasketSpec(std::move(spots), std::move(vols), std::move(corr), rate,
                          std::move(weights), maturity);
    } catch (const DefinitenessError& e) {
        throw ConfigError("corr", e.what());
    } catch (const PreconditionError& e) {
        throw ConfigError("spec", e.what());
    }
}

BasketSpec spec_from_file_or_inline(const std::string& path_or_json) {
    std::string text = path_or_json;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ConfigError("spec", "empty");
    if (text[first] != '{') {
        std::ifstream in(path_or_json);
        if (!in) throw ConfigError("spec", "cannot open file " + path_or_json);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("spec", std::string("JSON parse failure: ") + e.what());
    }
    return spec_from_json(j);
}

json energy_solution_to_json(const EnergySolution& sol) {
    json j;
    j["lambda"] = sol.lambda;
    j["n_solutions_found"] = sol.n_solutions_found;
    json cands = json::array();
    for (const MinimizerCandidate& c : sol.candidates) {
        json jc;
        jc["p0"] = vector_to_json(c.p0);
        jc["x1"] = vector_to_json(c.terminal.x);
        jc["energy"] = c.energy;
        jc["residual"] = c.residual;
        cands.push_back(std::move(jc));
    }
    j["candidates"] = std::move(cands);
    return j;
}

json focality_report_to_json(const FocalityReport& report) {
    json j;
    j["K"] = report.K;
    j["M"] = matrix_to_json(report.M);
    j["det"] = report.det;
    j["normalized_det"] = report.normalized_det;
    j["verdict"] = to_string(report.verdict);
    return j;
}

json expansion_result_to_json(const ExpansionResult& r) {
    json j;
    j["lambda"] = r.lambda;
    j["c2"] = r.c2;
    j["power"] = r.power;
    j["regime"] = to_string(r.regime);
    if (r.c0) j["c0"] = *r.c0;
    j["low_confidence"] = r.low_confidence;
    if (r.alt_power) j["alt_power"] = *r.alt_power;
    j["f_asymptotic"] = r.f_value;
    j["n_minimizers"] = r.n_minimizers;
    j["residual"] = r.residual;
    return j;
}

json density_curve_to_json(const DensityCurve& curve) {
    json j;
    j["method"] = to_string(curve.method);
    j["K"] = vector_to_json(curve.strikes);
    j["value"] = vector_to_json(curve.values);
    j["stderr"] = vector_to_json(curve.stderrs);
    return j;
}

std::string density_curve_to_csv(const DensityCurve& curve) {
    std::string out = "K,value,stderr,method\n";
    for (Eigen::Index i = 0; i < curve.strikes.size(); ++i) {
        out += format_double(curve.strikes[i]);
        out += ',';
        out += format_double(curve.values[i]);
        out += ',';
        out += format_double(curve.stderrs[i]);
        out += ',';
        out += to_string(curve.method);
        out += '\n';
    }
    return out;
}

}  // namespace basket
