#include "glscov/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace glscov::io {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    return x;
}

double to_double(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "Infinity" || s == "infinity") return kInf;
        if (s == "-inf" || s == "-Infinity" || s == "-infinity") return -kInf;
        if (s == "nan") return std::nan("");
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    throw DomainError("expected a number, got " + j.dump());
}

std::string csv_double(double x) {
    if (std::isnan(x)) return "nan";
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

Json knots_json(const std::vector<Knot>& knots) {
    Json pts = Json::array();
    for (const auto& k : knots) pts.push_back(Json::array({k.p, k.value}));
    return pts;
}

std::vector<Knot> knots_from(const Json& pts) {
    if (!pts.is_array() || pts.empty()) throw DomainError("tabulated psi needs a non-empty \"points\" array");
    std::vector<Knot> out;
    for (const auto& pt : pts) {
        if (!pt.is_array() || pt.size() != 2) throw DomainError("each point must be [p, psi]");
        out.push_back({to_double(pt[0]), to_double(pt[1])});
    }
    return out;
}

const Json& field(const Json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("psi JSON is missing \"") + key + "\"");
    return j.at(key);
}

}  // namespace

Json psi_to_json(const PsiFunction& psi) {
    Json j;
    j["kind"] = to_string(psi.kind());
    switch (psi.kind()) {
        case PsiKind::power: j["m"] = psi.m(); break;
        case PsiKind::finite_support:
            j["b"] = psi.b();
            j["beta"] = psi.beta();
            break;
        case PsiKind::extremal: j["r"] = psi.r(); break;
        case PsiKind::tabulated: j["points"] = knots_json(psi.knots()); break;
        case PsiKind::empirical:
            j["points"] = knots_json(psi.knots());
            j["sample_count"] = psi.sample_count();
            j["seed"] = psi.seed();
            break;
        case PsiKind::product:
            j["left"] = psi_to_json(psi.left());
            j["right"] = psi_to_json(psi.right());
            break;
        case PsiKind::dual: j["inner"] = psi_to_json(psi.inner()); break;
    }
    return j;
}

PsiFunction psi_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw DomainError("psi JSON must be an object with a \"kind\" string");
    const auto kind = j["kind"].get<std::string>();
    if (kind == "power") return PsiFunction::power(to_double(field(j, "m")));
    if (kind == "finite_support")
        return PsiFunction::finite_support(to_double(field(j, "b")), to_double(field(j, "beta")));
    if (kind == "extremal") return PsiFunction::extremal(to_double(field(j, "r")));
    if (kind == "tabulated") return PsiFunction::tabulated(knots_from(field(j, "points")));
    if (kind == "empirical")
        return PsiFunction::empirical(knots_from(field(j, "points")),
                                      j.value("sample_count", std::uint64_t{0}),
                                      j.value("seed", std::uint64_t{0}));
    if (kind == "product")
        return product_zeta(psi_from_json(field(j, "left")), psi_from_json(field(j, "right")));
    if (kind == "dual") return dual_psi(psi_from_json(field(j, "inner")));
    throw DomainError("unknown psi kind \"" + kind + "\"");
}

Json read_json_arg(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return Json::parse(arg);
        std::ifstream in(arg);
        if (!in) throw DomainError("cannot open " + arg);
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DomainError(std::string("invalid JSON: ") + e.what());
    }
}

PsiFunction parse_psi(const std::string& arg) { return psi_from_json(read_json_arg(arg)); }

MomentTable read_moment_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("moment CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "p,norm") throw DomainError("moment CSV header must be p,norm");
    MomentTable t;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("bad moment CSV row: " + line);
        t.entries.push_back({to_double(line.substr(0, comma)), to_double(line.substr(comma + 1))});
    }
    t.validate();
    return t;
}

void write_moment_csv(std::ostream& out, const MomentTable& table) {
    out << "p,norm\n";
    for (const auto& e : table.entries) out << csv_double(e.p) << ',' << csv_double(e.value) << '\n';
}

std::vector<double> read_samples(std::istream& in) {
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const double v = to_double(line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
        if (!std::isfinite(v)) throw DomainError("samples must be finite");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("no samples read");
    return out;
}

std::vector<double> read_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    return read_samples(in);
}

namespace {

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json notes_json(const std::vector<std::string>& notes) {
    Json a = Json::array();
    for (const auto& n : notes) a.push_back(n);
    return a;
}

}  // namespace

Json to_json(const FundamentalResult& r) {
    Json j;
    j["value"] = number(r.value);
    j["log_value"] = number(r.log_value);
    j["argmax_p"] = number(r.argmax_p);
    j["delta"] = number(r.delta);
    j["trunc_low"] = number(r.trunc_low);
    Json flags = Json::array();
    if (r.boundary != Boundary::interior) flags.push_back(to_string(r.boundary));
    j["flags"] = flags;
    return j;
}

Json to_json(const BoundReport& r) {
    Json j;
    j["theorem"] = to_string(r.theorem);
    j["value"] = number(r.value);
    j["feasible"] = r.feasible;
    j["p"] = optional_number(r.p);
    j["q"] = optional_number(r.q);
    j["notes"] = notes_json(r.notes);
    Json d = Json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = number(v);
    j["diagnostics"] = d;
    return j;
}

Json to_json(const UniformPhi& r) {
    Json j;
    j["alpha"] = number(r.alpha);
    j["beta"] = number(r.beta);
    j["value"] = number(r.value);
    j["p"] = number(r.p);
    j["q"] = number(r.q);
    return j;
}

Json to_json(const FactorizationCheck& r) {
    Json j;
    j["alpha"] = number(r.alpha);
    j["beta"] = number(r.beta);
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["holds"] = r.holds;
    j["one_sided_ok"] = r.one_sided_ok;
    j["support_case"] = r.support_case;
    j["reason"] = r.reason;
    j["p_alpha"] = number(r.p_alpha);
    j["p_beta"] = number(r.p_beta);
    j["alpha0"] = optional_number(r.alpha0);
    j["beta0"] = optional_number(r.beta0);
    return j;
}

Json to_json(const SharpnessResult& r) {
    const auto& w = r.best;
    Json j;
    j["p"] = number(r.p);
    j["q"] = number(r.q);
    j["ratio"] = number(w.ratio);
    j["evaluated"] = r.evaluated;
    j["skipped_degenerate"] = r.skipped_degenerate;
    Json wit;
    wit["probs"] = w.space.probs;
    wit["blocks"] = w.field.block_of;
    wit["xi"] = w.xi.values;
    wit["eta"] = w.eta.values;
    wit["alpha"] = number(w.alpha);
    wit["cov"] = number(w.cov);
    wit["norm_p"] = number(w.norm_p);
    wit["norm_q"] = number(w.norm_q);
    j["witness"] = wit;
    return j;
}

Json to_json(const SummabilityReport& r) {
    Json j;
    j["K"] = r.K;
    j["partial_sum"] = number(r.partial_sum);
    j["half_sum"] = number(r.half_sum);
    j["tail_ratio"] = number(r.tail_ratio);
    j["block_ratio"] = number(r.block_ratio);
    j["verdict"] = to_string(r.verdict);
    j["note"] = r.note;
    return j;
}

Json to_json(const SigmaRow& r) {
    Json j;
    j["n"] = r.n;
    j["replications"] = r.replications;
    j["mean"] = number(r.mean);
    j["variance"] = number(r.variance);
    j["se"] = number(r.se);
    j["exact"] = optional_number(r.exact);
    return j;
}

Json to_json(const CampaignReport& r) {
    Json j;
    j["violations"] = r.violations;
    j["instances"] = r.instances;
    j["seed"] = r.seed;
    Json by = Json::object();
    for (const auto& [k, v] : r.violations_by_theorem) by[k] = v;
    j["violations_by_theorem"] = by;
    j["bounds_evaluated"] = r.bounds_evaluated;
    j["infeasible_skipped"] = r.infeasible_skipped;
    j["product_instances"] = r.product_instances;
    j["product_nonzero"] = r.product_nonzero;
    j["alpha_gt_beta"] = r.alpha_gt_beta;
    j["zero_alpha_nonzero_cov"] = r.zero_alpha_nonzero_cov;
    j["max_ratio"] = number(r.max_ratio);
    j["min_slack"] = number(1.0 - r.max_ratio);
    j["tightest_index"] = r.tightest_index;
    j["tightest_theorem"] = r.tightest_theorem;
    return j;
}

void write_campaign_csv(std::ostream& out, const CampaignReport& r) {
    out << "index,kind,atoms,alpha,beta,cov,tightest_bound,tightest,ratio,slack\n";
    for (const auto& row : r.rows) {
        out << row.index << ',' << row.kind << ',' << row.atoms << ',' << csv_double(row.alpha) << ','
            << csv_double(row.beta) << ',' << csv_double(row.cov) << ','
            << csv_double(row.tightest_bound) << ",\"" << row.tightest << "\","
            << csv_double(row.ratio) << ',' << csv_double(1.0 - row.ratio) << '\n';
    }
}

SequenceModel model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw DomainError("model JSON needs a \"kind\"");
    SequenceModel m;
    const auto kind = j["kind"].get<std::string>();
    m.seed = j.value("seed", std::uint64_t{0});
    if (kind == "m_dependent") {
        m.kind = SequenceModel::Kind::m_dependent;
        m.coeffs.clear();
        for (const auto& c : j.at("coeffs")) m.coeffs.push_back(to_double(c));
        const auto inn = j.value("innovation", std::string("normal"));
        if (inn == "normal") {
            m.innovation = Innovation::normal;
        } else if (inn == "rademacher") {
            m.innovation = Innovation::rademacher;
        } else if (inn == "uniform") {
            m.innovation = Innovation::uniform;
        } else {
            throw DomainError("unknown innovation law \"" + inn + "\"");
        }
    } else if (kind == "finite_markov") {
        m.kind = SequenceModel::Kind::finite_markov;
        for (const auto& row : j.at("transition")) {
            std::vector<double> r;
            for (const auto& x : row) r.push_back(to_double(x));
            m.transition.push_back(std::move(r));
        }
        for (const auto& v : j.at("values")) m.state_values.push_back(to_double(v));
    } else if (kind == "user_samples") {
        m.kind = SequenceModel::Kind::user_samples;
        if (j.contains("samples")) {
            for (const auto& v : j["samples"]) m.samples.push_back(to_double(v));
        } else if (j.contains("samples_file")) {
            m.samples = read_samples_file(j["samples_file"].get<std::string>());
        } else {
            throw DomainError("user_samples model needs \"samples\" or \"samples_file\"");
        }
    } else {
        throw DomainError("unknown model kind \"" + kind + "\"");
    }
    m.validate();
    return m;
}

}  // namespace glscov::io
