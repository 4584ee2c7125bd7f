#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "glscov/clt.hpp"
#include "glscov/cov_bounds.hpp"
#include "glscov/finite_oracle.hpp"
#include "glscov/fundamental.hpp"
#include "glscov/json_io.hpp"
#include "glscov/parallel.hpp"
#include "glscov/psi.hpp"
#include "glscov/tails.hpp"

namespace glscov::cli {

namespace {

using io::Json;

double parse_number(const std::string& s) { return io::to_double(Json(s)); }

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        const auto a = tok.find_first_not_of(" \t");
        const auto b = tok.find_last_not_of(" \t");
        out.push_back(a == std::string::npos ? "" : tok.substr(a, b - a + 1));
    }
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s)) out.push_back(parse_number(t));
    if (out.empty()) throw DomainError("empty list");
    return out;
}

// "start,stop,count" with count points; log spacing when `log` is set.
std::vector<double> parse_range(const std::string& s, bool log, double e_token = M_E) {
    const auto t = split(s);
    if (t.size() != 3) throw DomainError("range must be start,stop,count");
    const double a = t[0] == "e" ? e_token : parse_number(t[0]);
    const double b = t[1] == "e" ? e_token : parse_number(t[1]);
    const double c = parse_number(t[2]);
    if (!(c >= 1.0) || c != std::floor(c)) throw DomainError("range count must be a positive integer");
    const int n = static_cast<int>(c);
    if (log && !(a > 0.0 && b > 0.0)) throw DomainError("log range needs positive ends");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        out.push_back(i == 0 ? a : i == n - 1 ? b : log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
    }
    return out;
}

// Destination of a report: the --out file or the caller's stream. Output is
// held until commit() so that a failing command leaves nothing half-written.
class Sink {
public:
    Sink(std::ostream& fallback, std::string path) : fallback_(fallback), path_(std::move(path)) {}

    std::ostream& stream() { return buf_; }

    void json(const Json& j) { buf_ << j.dump() << '\n'; }

    void commit() {
        if (path_.empty()) {
            fallback_ << buf_.str();
            return;
        }
        std::ofstream f(path_);
        if (!f) throw DomainError("cannot write " + path_);
        f << buf_.str();
    }

private:
    std::ostream& fallback_;
    std::string path_;
    std::ostringstream buf_;
};

struct Common {
    std::string out_path;
};

void add_out(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out_path, "Write the report to this path instead of stdout");
}

// ---- psi ---------------------------------------------------------------

struct PsiArgs {
    std::string psi;
    bool dual = false;
    std::string product;
    std::string moments;
    std::string samples;
    std::string moment_grid = "1,1.5,2,3,4,6,8,12,16";
    std::string eval = "1,1.5,2,3,4,8,16";
    std::string norm_of;
    std::uint64_t seed = 0;
};

void cmd_psi(const PsiArgs& a, Sink& sink) {
    PsiFunction psi = PsiFunction::power(1.0);
    if (!a.moments.empty()) {
        std::ifstream in(a.moments);
        if (!in) throw DomainError("cannot open " + a.moments);
        psi = natural_from_moments(io::read_moment_csv(in));
    } else if (!a.samples.empty()) {
        const auto x = io::read_samples_file(a.samples);
        const auto grid = parse_list(a.moment_grid);
        psi = natural_from_moments(MomentTable::from_samples(x, grid, a.seed));
    } else if (!a.psi.empty()) {
        psi = io::parse_psi(a.psi);
    } else {
        throw DomainError("one of --psi, --moments, --samples is required");
    }
    if (a.dual) psi = dual_psi(psi);
    if (!a.product.empty()) psi = product_zeta(psi, io::parse_psi(a.product));

    Json j;
    j["psi"] = io::psi_to_json(psi);
    j["support_bound"] = io::number(psi.support_bound());
    Json vals = Json::array();
    for (double p : parse_list(a.eval)) vals.push_back(Json::array({io::number(p), io::number(eval_psi(psi, p))}));
    j["values"] = vals;
    if (!a.norm_of.empty()) {
        std::ifstream in(a.norm_of);
        if (!in) throw DomainError("cannot open " + a.norm_of);
        const GlsNorm n = gls_norm(io::read_moment_csv(in), psi);
        j["gls_norm"] = {{"value", io::number(n.value)}, {"argmax_p", io::number(n.argmax_p)}};
    }
    sink.json(j);
}

// ---- fundamental -------------------------------------------------------

struct FundArgs {
    std::string psi;
    std::optional<double> delta;
    std::string delta_grid;
    std::optional<double> trunc_low;
    bool root = false;
};

Json fundamental_json(const PsiFunction& psi, const FundArgs& a, double delta) {
    const FundamentalResult r =
        a.trunc_low ? fundamental_truncated(psi, *a.trunc_low, delta) : fundamental(psi, delta);
    Json j = io::to_json(r);
    if (psi.kind() == PsiKind::power && delta > 0.0 && delta < std::exp(-1.0) && !a.trunc_low) {
        j["closed_form"] = io::number(closed_form_power(psi.m(), delta));
    }
    if (psi.kind() == PsiKind::finite_support && delta <= std::exp(-1.0) && !a.trunc_low) {
        const FiniteClosedForm c = closed_form_finite(psi.b(), psi.beta(), delta);
        j["closed_form"] = {{"value", io::number(c.value)},
                            {"constant_K", io::number(c.stated_constant)},
                            {"observed_constant", io::number(c.observed_ratio)},
                            {"shape", io::number(c.shape)},
                            {"constant_mismatch", c.constant_mismatch}};
    }
    if (a.root) {
        const ArgmaxSolution s = solve_argmax(psi, delta);
        j["root_argmax_p"] = io::number(s.p);
        j["root_from_solver"] = s.from_root;
        if (!s.warning.empty()) j["root_warning"] = s.warning;
    }
    return j;
}

void cmd_fundamental(const FundArgs& a, Sink& sink) {
    const PsiFunction psi = io::parse_psi(a.psi);
    if (a.delta_grid.empty()) {
        if (!a.delta) throw DomainError("--delta or --delta-grid is required");
        sink.json(fundamental_json(psi, a, *a.delta));
        return;
    }
    auto& os = sink.stream();
    os << "delta,value,argmax_p,flags\n";
    for (double d : parse_range(a.delta_grid, true)) {
        const FundamentalResult r = a.trunc_low ? fundamental_truncated(psi, *a.trunc_low, d) : fundamental(psi, d);
        os << io::csv_double(d) << ',' << io::csv_double(r.value) << ',' << io::csv_double(r.argmax_p) << ','
           << (r.boundary == Boundary::interior ? "" : to_string(r.boundary)) << '\n';
    }
}

// ---- tail --------------------------------------------------------------

struct TailArgs {
    std::string psi;
    double norm = 1.0;
    std::string y_grid = "e,6,50";
    std::string samples;
};

void cmd_tail(const TailArgs& a, Sink& sink) {
    const PsiFunction psi = io::parse_psi(a.psi);
    if (!(a.norm > 0.0)) throw DomainError("--norm must be positive");
    const auto ys = parse_range(a.y_grid, false, M_E * a.norm);
    std::vector<double> emp;
    if (!a.samples.empty()) {
        const auto x = io::read_samples_file(a.samples);
        emp = empirical_tail_grid(x, ys);
    }
    auto& os = sink.stream();
    os << (emp.empty() ? "y,bound\n" : "y,bound,empirical\n");
    for (std::size_t i = 0; i < ys.size(); ++i) {
        os << io::csv_double(ys[i]) << ',' << io::csv_double(tail_bound(psi, a.norm, ys[i]));
        if (!emp.empty()) os << ',' << io::csv_double(emp[i]);
        os << '\n';
    }
}

// ---- bound -------------------------------------------------------------

struct BoundArgs {
    std::string theorem;
    std::string psi;
    std::string nu;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::string p;
    std::string q;
    std::optional<double> q0;
    double norm_xi = 1.0;
    double norm_eta = 1.0;
    std::string kernel = "davydov";
    std::string domain = "T";
    std::string rect;
};

double need(const std::optional<double>& x, const char* flag) {
    if (!x) throw DomainError(std::string(flag) + " is required for this theorem");
    return *x;
}

double need_number(const std::string& s, const char* flag) {
    if (s.empty()) throw DomainError(std::string(flag) + " is required for this theorem");
    return parse_number(s);
}

PsiFunction need_psi(const std::string& s, const char* flag) {
    if (s.empty()) throw DomainError(std::string(flag) + " is required for this theorem");
    return io::parse_psi(s);
}

// older numbered spellings of the example theorems
std::string canonical_theorem(const std::string& t) {
    static const std::map<std::string, std::string> aliases{{"example-5.1", "example-power-power"},
                                                            {"example-5.2", "example-finite-finite"},
                                                            {"example-5.3", "example-power-finite"},
                                                            {"example-5.4", "example-combined"}};
    const auto it = aliases.find(t);
    return it == aliases.end() ? t : it->second;
}

BoundReport run_bound(const BoundArgs& a) {
    const std::string t = canonical_theorem(a.theorem);
    if (t == "davydov")
        return davydov_bound(need(a.alpha, "--alpha"), need_number(a.p, "--p"), need_number(a.q, "--q"), a.norm_xi, a.norm_eta);
    if (t == "ibragimov") return ibragimov_bound(need(a.beta, "--beta"), need_number(a.p, "--p"), a.norm_xi, a.norm_eta);
    if (t == "holder") return holder_bound(need_number(a.p, "--p"), a.norm_xi, a.norm_eta);
    if (t == "gls-strong")
        return gls_strong_bound(need_psi(a.psi, "--psi"), need_psi(a.nu, "--nu"), need(a.beta, "--beta"), a.norm_xi, a.norm_eta);
    if (t == "gls-dual-pair")
        return gls_dual_pair_bound(need_psi(a.psi, "--psi"), need(a.beta, "--beta"), a.norm_xi, a.norm_eta);
    if (t == "gls-uniform")
        return gls_uniform_bound(need_psi(a.psi, "--psi"), need_psi(a.nu, "--nu"), need(a.alpha, "--alpha"), a.norm_xi, a.norm_eta);
    if (t == "gls-identical")
        return gls_identical_bound(need_psi(a.psi, "--psi"), need(a.alpha, "--alpha"), a.norm_xi, a.norm_eta);
    if (t == "example-power-power" || t == "example-finite-finite" || t == "example-power-finite") {
        const PsiFunction x = need_psi(a.psi, "--psi");
        const PsiFunction y = need_psi(a.nu, "--nu");
        const double alpha = need(a.alpha, "--alpha");
        const bool xp = x.kind() == PsiKind::power;
        const bool yp = y.kind() == PsiKind::power;
        const bool xf = x.kind() == PsiKind::finite_support;
        const bool yf = y.kind() == PsiKind::finite_support;
        if (t == "example-power-power") {
            if (!xp || !yp) throw DomainError("example-power-power needs two power functions");
            return example_power_power(x.m(), y.m(), alpha, a.norm_xi, a.norm_eta);
        }
        if (t == "example-finite-finite") {
            if (!xf || !yf) throw DomainError("example-finite-finite needs two finite_support functions");
            return example_finite_finite(x.b(), x.beta(), y.b(), y.beta(), alpha, a.norm_xi, a.norm_eta);
        }
        if (xp && yf) return example_power_finite(x.m(), y.b(), y.beta(), alpha, a.norm_xi, a.norm_eta);
        if (xf && yp) return example_power_finite(y.m(), x.b(), x.beta(), alpha, a.norm_eta, a.norm_xi);
        throw DomainError("example-power-finite needs one power and one finite_support function");
    }
    if (t == "example-combined")
        return example_combined(need_psi(a.psi, "--psi"), need(a.q0, "--q0"), need(a.alpha, "--alpha"), a.norm_xi, a.norm_eta);
    if (t == "generic") {
        BoundKernel h;
        if (a.kernel == "davydov") {
            h = davydov_kernel(need(a.alpha, "--alpha"));
        } else if (a.kernel == "ibragimov") {
            h = ibragimov_kernel(need(a.beta, "--beta"));
        } else if (a.kernel == "holder") {
            h = holder_kernel();
        } else {
            throw DomainError("unknown kernel \"" + a.kernel + "\"");
        }
        BoundDomain d;
        if (a.domain == "T") {
            d.kind = DomainKind::T;
        } else if (a.domain == "R") {
            d.kind = DomainKind::R;
        } else if (a.domain == "conjugate-line") {
            d.kind = DomainKind::conjugate_line;
        } else if (a.domain == "rectangle") {
            d.kind = DomainKind::rectangle;
            const auto r = parse_list(a.rect);
            if (r.size() != 4) throw DomainError("--rect needs p_lo,p_hi,q_lo,q_hi");
            d.p_lo = r[0];
            d.p_hi = r[1];
            d.q_lo = r[2];
            d.q_hi = r[3];
        } else {
            throw DomainError("unknown domain \"" + a.domain + "\"");
        }
        return generic_bound(h, need_psi(a.psi, "--psi"), need_psi(a.nu, "--nu"), d, a.norm_xi, a.norm_eta);
    }
    throw DomainError("unknown theorem \"" + t + "\"");
}

// ---- factorization -----------------------------------------------------

struct FactArgs {
    std::string psi;
    std::string nu;
    std::string alpha_grid;
    std::string beta_grid;
};

void cmd_factorization(const FactArgs& a, Sink& sink) {
    const PsiFunction psi = io::parse_psi(a.psi);
    const PsiFunction nu = io::parse_psi(a.nu);
    const auto as = parse_list(a.alpha_grid);
    const auto bs = parse_list(a.beta_grid);
    auto& os = sink.stream();
    os << "alpha,beta,lhs,rhs,holds\n";
    for (double al : as) {
        for (double be : bs) {
            const FactorizationCheck f = factorization_check(psi, nu, al, be);
            os << io::csv_double(al) << ',' << io::csv_double(be) << ',' << io::csv_double(f.lhs) << ','
               << io::csv_double(f.rhs) << ',' << (f.holds ? "true" : "false") << '\n';
        }
    }
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t instances = 1000;
    std::uint64_t seed = 42;
    int max_atoms = 10;
    int max_blocks = 4;
    std::string psi_set;
    std::string csv;
    bool serial = false;
};

void cmd_verify(const VerifyArgs& a, Sink& sink) {
    CampaignConfig c;
    c.instances = a.instances;
    c.seed = a.seed;
    c.max_atoms = a.max_atoms;
    c.max_blocks = a.max_blocks;
    if (!a.psi_set.empty()) {
        const Json j = io::read_json_arg(a.psi_set);
        if (!j.is_array()) throw DomainError("--psi-set must be a JSON array of psi objects");
        c.families.clear();
        for (const auto& x : j) c.families.push_back(io::psi_from_json(x));
    }
    const CampaignReport r = verify_campaign(c, a.serial ? Exec::serial : Exec::parallel);
    if (!a.csv.empty()) {
        std::ofstream f(a.csv);
        if (!f) throw DomainError("cannot write " + a.csv);
        io::write_campaign_csv(f, r);
    }
    sink.json(io::to_json(r));
}

// ---- clt ---------------------------------------------------------------

struct CltArgs {
    std::string model;
    std::string psi;
    int K = 10000;
    std::string n_grid = "100,1000,10000";
    std::uint64_t reps = 2000;
    std::uint64_t seed = 7;
};

void cmd_clt(const CltArgs& a, Sink& sink) {
    const Json mj = io::read_json_arg(a.model);
    SequenceModel model = io::model_from_json(mj);
    if (!mj.contains("seed")) model.seed = a.seed;

    std::optional<CltProfile> profile;
    if (mj.contains("profile")) {
        const Json& pj = mj["profile"];
        std::vector<double> al;
        std::vector<double> be;
        for (const auto& x : pj.at("alpha")) al.push_back(io::to_double(x));
        for (const auto& x : pj.contains("beta") ? pj["beta"] : pj["alpha"]) be.push_back(io::to_double(x));
        const int K = std::min<int>(a.K, static_cast<int>(std::min(al.size(), be.size())));
        profile = profile_from_functions([&](int k) { return al[static_cast<std::size_t>(k - 1)]; },
                                         [&](int k) { return be[static_cast<std::size_t>(k - 1)]; },
                                         natural_psi(model), K);
    } else if (model.kind == SequenceModel::Kind::finite_markov) {
        profile = markov_mixing_profile(model, a.K);
    } else if (model.kind == SequenceModel::Kind::m_dependent) {
        profile = m_dependent_profile(model, a.K);
    }
    if (profile && !a.psi.empty()) profile->psi = io::parse_psi(a.psi);

    Json j;
    j["model"] = to_string(model.kind);
    Json verdicts = Json::object();
    if (profile) {
        const auto y = y_sequence(*profile);
        const auto z = z_sequence(*profile);
        const int K = profile->K();
        j["K"] = K;
        j["profile_lower_bound"] = profile->lower_bound;
        j["psi_kind"] = to_string(profile->psi.kind());
        if (K >= 16) {
            const SummabilityReport ry = summability_report(y, K);
            const SummabilityReport rz = summability_report(z, K);
            j["y_partial_sum"] = io::number(ry.partial_sum);
            j["z_partial_sum"] = io::number(rz.partial_sum);
            verdicts["y"] = to_string(ry.verdict);
            verdicts["z"] = to_string(rz.verdict);
            j["y_report"] = io::to_json(ry);
            j["z_report"] = io::to_json(rz);
        }
        j["y_nonincreasing_from"] = eventually_nonincreasing_from(y);
    } else {
        j["note"] = "no mixing profile for this model; y and z sequences skipped";
    }
    j["verdicts"] = verdicts;
    Json table = Json::array();
    if (a.reps > 0) {
        std::vector<std::uint64_t> ns;
        for (double n : parse_list(a.n_grid)) {
            if (!(n >= 1.0) || n != std::floor(n)) throw DomainError("--n-grid values must be positive integers");
            ns.push_back(static_cast<std::uint64_t>(n));
        }
        for (const auto& row : sigma_n_estimate(model, ns, a.reps, model.seed)) table.push_back(io::to_json(row));
    }
    j["sigma_table"] = table;
    sink.json(j);
}

// ---- sharpness ---------------------------------------------------------

struct SharpArgs {
    std::string p = "4";
    std::string q = "4";
    std::uint64_t budget = 2000;
    std::uint64_t seed = 1;
};

inline constexpr int kScenarioVersion = 1;

// {"version": 1, "command": "<subcommand>", "args": {"flag": value, ...}}.
// Arguments given on the command line win over the file.
std::vector<std::string> expand_scenario(const std::vector<std::string>& argv) {
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--config" && i + 1 < argv.size()) {
            path = argv[++i];
        } else if (argv[i].rfind("--config=", 0) == 0) {
            path = argv[i].substr(9);
        } else {
            rest.push_back(argv[i]);
        }
    }
    if (path.empty()) return argv;
    const Json j = io::read_json_arg(path);
    if (!j.is_object() || j.value("version", -1) != kScenarioVersion)
        throw DomainError("scenario config needs \"version\": " + std::to_string(kScenarioVersion));
    if (!j.contains("command") || !j["command"].is_string()) throw DomainError("scenario config needs a \"command\"");
    const auto given = [&](const std::string& flag) {
        for (const auto& a : rest)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> out{rest.empty() ? "glscov" : rest.front()};
    std::size_t first = 1;
    if (rest.size() > 1 && rest[1].rfind("-", 0) != 0) {
        if (rest[1] != j["command"].get<std::string>()) throw DomainError("scenario command does not match " + rest[1]);
        first = 2;
    }
    out.push_back(j["command"].get<std::string>());
    if (j.contains("args")) {
        for (const auto& [key, v] : j["args"].items()) {
            const std::string flag = "--" + key;
            if (given(flag)) continue;
            if (v.is_boolean()) {
                if (v.get<bool>()) out.push_back(flag);
                continue;
            }
            out.push_back(flag);
            out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(first), rest.end());
    return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_threads_from_env();
    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_scenario(args);
    } catch (const std::exception& e) {
        Json j;
        j["error"] = e.what();
        out << j.dump() << '\n';
        return kExitDomain;
    }
    CLI::App app{"GLS covariance-bound toolkit", "glscov"};
    app.require_subcommand(1);
    app.footer("Any subcommand may be read from a scenario file with --config path.json:\n"
               "  {\"version\": 1, \"command\": \"bound\", \"args\": {\"theorem\": \"davydov\", ...}}\n"
               "GLSCOV_THREADS caps the OpenMP thread count.");
    Common common;

    PsiArgs psi_a;
    auto* psi = app.add_subcommand("psi", "Evaluate, transform or build a generating function");
    psi->add_option("--psi", psi_a.psi, "psi JSON (inline or file)");
    psi->add_flag("--dual", psi_a.dual, "Replace psi by its dual p -> psi(p/(p-1))");
    psi->add_option("--product", psi_a.product, "Multiply by nu(p/(p-1)) for this nu");
    psi->add_option("--moments", psi_a.moments, "Natural function from a p,norm CSV");
    psi->add_option("--samples", psi_a.samples, "Natural function from samples (one per line)");
    psi->add_option("--moment-grid", psi_a.moment_grid, "p grid for --samples");
    psi->add_option("--eval", psi_a.eval, "Comma-separated p values to evaluate");
    psi->add_option("--norm-of", psi_a.norm_of, "GLS norm of a p,norm CSV under psi");
    psi->add_option("--seed", psi_a.seed, "Seed recorded for sample-built functions");
    add_out(psi, common);

    FundArgs fund_a;
    auto* fund = app.add_subcommand("fundamental", "Fundamental function phi(delta)");
    fund->add_option("--psi", fund_a.psi, "psi JSON (inline or file)")->required();
    fund->add_option("--delta", fund_a.delta, "delta > 0");
    fund->add_option("--delta-grid", fund_a.delta_grid, "start,stop,count (log spaced); CSV output");
    fund->add_option("--trunc-low", fund_a.trunc_low, "Restrict the sup to p >= s");
    fund->add_flag("--root", fund_a.root, "Also solve g'(x) = ln(1/delta) for the argmax");
    add_out(fund, common);

    TailArgs tail_a;
    auto* tail = app.add_subcommand("tail", "Tail bound 2 exp(-v*(ln(y/norm)))");
    tail->add_option("--psi", tail_a.psi, "psi JSON (inline or file)")->required();
    tail->add_option("--norm", tail_a.norm, "GLS norm");
    tail->add_option("--y-grid", tail_a.y_grid, "start,stop,count; start may be 'e' for e*norm");
    tail->add_option("--samples", tail_a.samples, "Samples for the empirical tail column");
    add_out(tail, common);

    BoundArgs bound_a;
    auto* bound = app.add_subcommand("bound", "Covariance bound report");
    bound->add_option("--theorem", bound_a.theorem, "davydov|ibragimov|holder|gls-strong|gls-dual-pair|gls-uniform|"
                                                    "gls-identical|example-power-power|example-finite-finite|example-power-finite|example-combined|generic")
        ->required();
    bound->add_option("--psi", bound_a.psi, "psi JSON for xi");
    bound->add_option("--nu", bound_a.nu, "psi JSON for eta");
    bound->add_option("--alpha", bound_a.alpha, "uniform mixing coefficient");
    bound->add_option("--beta", bound_a.beta, "strong mixing coefficient");
    bound->add_option("--p", bound_a.p, "exponent for xi (may be inf)");
    bound->add_option("--q", bound_a.q, "exponent for eta (may be inf)");
    bound->add_option("--q0", bound_a.q0, "Lebesgue exponent of eta (example-combined)");
    bound->add_option("--norm-xi", bound_a.norm_xi, "norm of xi");
    bound->add_option("--norm-eta", bound_a.norm_eta, "norm of eta");
    bound->add_option("--kernel", bound_a.kernel, "generic: davydov|ibragimov|holder");
    bound->add_option("--domain", bound_a.domain, "generic: T|R|conjugate-line|rectangle");
    bound->add_option("--rect", bound_a.rect, "generic rectangle: p_lo,p_hi,q_lo,q_hi");
    add_out(bound, common);

    FactArgs fact_a;
    auto* fact = app.add_subcommand("factorization", "Phi(alpha, beta) against phi(alpha) phi(beta); CSV");
    fact->add_option("--psi", fact_a.psi, "psi JSON")->required();
    fact->add_option("--nu", fact_a.nu, "nu JSON")->required();
    fact->add_option("--alpha-grid", fact_a.alpha_grid, "comma-separated alphas")->required();
    fact->add_option("--beta-grid", fact_a.beta_grid, "comma-separated betas")->required();
    add_out(fact, common);

    VerifyArgs ver_a;
    auto* ver = app.add_subcommand("verify", "Randomized finite-space verification campaign");
    ver->add_option("--instances", ver_a.instances, "number of instances");
    ver->add_option("--seed", ver_a.seed, "master seed");
    ver->add_option("--max-atoms", ver_a.max_atoms, "atoms per space");
    ver->add_option("--max-blocks", ver_a.max_blocks, "blocks per partition (<= 12)");
    ver->add_option("--psi-set", ver_a.psi_set, "JSON array of psi families");
    ver->add_option("--csv", ver_a.csv, "per-instance CSV path");
    ver->add_flag("--serial", ver_a.serial, "use the serial reference path");
    add_out(ver, common);

    CltArgs clt_a;
    auto* clt = app.add_subcommand("clt", "Summability diagnostics and Sigma(n) estimates");
    clt->add_option("--model", clt_a.model, "model JSON (inline or file)")->required();
    clt->add_option("--psi", clt_a.psi, "override the natural function");
    clt->add_option("--K", clt_a.K, "horizon");
    clt->add_option("--n-grid", clt_a.n_grid, "comma-separated n");
    clt->add_option("--reps", clt_a.reps, "Monte Carlo replications (0 skips)");
    clt->add_option("--seed", clt_a.seed, "seed unless the model sets one");
    add_out(clt, common);

    SharpArgs sh_a;
    auto* sh = app.add_subcommand("sharpness", "Search F = G instances maximizing |Cov| / Davydov shape");
    sh->add_option("--p", sh_a.p, "exponent p");
    sh->add_option("--q", sh_a.q, "exponent q");
    sh->add_option("--budget", sh_a.budget, "random candidates");
    sh->add_option("--seed", sh_a.seed, "seed");
    add_out(sh, common);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    Sink sink(out, common.out_path);
    try {
        if (psi->parsed()) {
            cmd_psi(psi_a, sink);
        } else if (fund->parsed()) {
            cmd_fundamental(fund_a, sink);
        } else if (tail->parsed()) {
            cmd_tail(tail_a, sink);
        } else if (bound->parsed()) {
            sink.json(io::to_json(run_bound(bound_a)));
        } else if (fact->parsed()) {
            cmd_factorization(fact_a, sink);
        } else if (ver->parsed()) {
            cmd_verify(ver_a, sink);
        } else if (clt->parsed()) {
            cmd_clt(clt_a, sink);
        } else if (sh->parsed()) {
            sink.json(io::to_json(sharpness_probe(parse_number(sh_a.p), parse_number(sh_a.q), sh_a.budget, sh_a.seed)));
        }
        sink.commit();
    } catch (const std::exception& e) {
        Json j;
        j["error"] = e.what();
        out << j.dump() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace glscov::cli
