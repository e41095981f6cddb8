#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qlog/domains.hpp>
#include <qlog/gammel.hpp>
#include <qlog/lagrange.hpp>
#include <qlog/quadpoint.hpp>
#include <qlog/resonance.hpp>
#include <qlog/series.hpp>

using json = nlohmann::ordered_json;
using namespace qlog;

namespace {

const int mp_bits = 256;

cplx parse_complex(const std::string& text) {
    static const std::regex re_full(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)([-+](?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)i\s*$)");
    static const std::regex re_real(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*$)");
    static const std::regex re_imag(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)i\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, re_full)) return {std::stod(m[1]), std::stod(m[2])};
    if (std::regex_match(text, m, re_real)) return {std::stod(m[1]), 0.0};
    if (std::regex_match(text, m, re_imag)) return {0.0, std::stod(m[1])};
    throw InvalidArgument("malformed complex number '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_complex(t));
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    for (const auto& t : split(s, ',')) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(t, &pos);
        } catch (const std::exception&) {
            throw InvalidArgument("malformed integer '" + t + "'");
        }
        if (pos != t.size()) throw InvalidArgument("malformed integer '" + t + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& c : parse_complex_list(s)) {
        if (c.imag() != 0) throw InvalidArgument("expected real values");
        out.push_back(c.real());
    }
    return out;
}

std::string cstr(cplx z) { return format_complex(z, 17); }

std::string mpstr(const MpReal& x) { return x.str(40, std::ios_base::scientific); }

// g from "delta" or a JSON array of "re+imi" strings, entry k = coefficient of z^{k+1}.
TruncatedPowerSeries load_g(const std::string& spec) {
    if (spec == "delta") return delta_series(64);
    std::ifstream in(spec);
    if (!in) throw InvalidArgument("cannot open coefficient file '" + spec + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("coefficient file is not valid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw InvalidArgument("coefficient file must be a non-empty JSON array");
    std::vector<cplx> c{0.0};
    for (const auto& v : j) {
        if (v.is_string())
            c.push_back(parse_complex(v.get<std::string>()));
        else if (v.is_number())
            c.push_back(v.get<double>());
        else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            c.push_back(cplx(v[0].get<double>(), v[1].get<double>()));
        else
            throw InvalidArgument("coefficient entries must be numbers, [re, im] pairs or \"re+imi\" strings");
    }
    return polynomial(std::move(c));
}

QuadraticIrrational parse_poly(const std::string& s, int eps) {
    auto v = parse_int_list(s);
    if (v.size() != 3) throw InvalidArgument("--poly needs a,b,c");
    if (eps == 0) return make_quadratic(v[0], v[1], v[2]);
    return make_quadratic(v[0], v[1], v[2], eps);
}

struct Global {
    std::string output = "json";
    double tol = 1e-12;
    long long seed = 0;
    int precision_bits = 53;
};

class Emitter {
public:
    Emitter(const Global& g, std::string command, json config) : g_(g) {
        config_ = json::object();
        config_["command"] = std::move(command);
        config_["precision_bits"] = g.precision_bits;
        config_["multiprecision_bits"] = mp_bits;
        config_["tol"] = g.tol;
        config_["seed"] = g.seed;
        config_["output"] = g.output;
        for (auto& [k, v] : config.items()) config_[k] = v;
    }
    void add(json record) { rows_.push_back(std::move(record)); }
    void flush() const {
        if (g_.output == "json") {
            for (const auto& r : rows_) {
                json line = json::object();
                line["config"] = config_;
                for (auto& [k, v] : r.items()) line[k] = v;
                std::cout << line.dump() << "\n";
            }
            return;
        }
        std::vector<std::string> keys;
        for (auto& [k, v] : config_.items()) keys.push_back("config." + k);
        std::vector<std::string> rkeys;
        for (const auto& r : rows_)
            for (auto& [k, v] : r.items())
                if (std::find(rkeys.begin(), rkeys.end(), k) == rkeys.end()) rkeys.push_back(k);
        keys.insert(keys.end(), rkeys.begin(), rkeys.end());
        for (std::size_t i = 0; i < keys.size(); ++i) std::cout << (i ? "," : "") << keys[i];
        std::cout << "\n";
        for (const auto& r : rows_) {
            bool first = true;
            auto put = [&](const json& v) {
                std::cout << (first ? "" : ",") << csv_cell(v);
                first = false;
            };
            for (auto& [k, v] : config_.items()) put(v);
            for (const auto& k : rkeys) put(r.contains(k) ? r[k] : json());
            std::cout << "\n";
        }
    }

private:
    static std::string csv_cell(const json& v) {
        std::string s = v.is_string() ? v.get<std::string>() : (v.is_null() ? "" : v.dump());
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        }
        return s;
    }
    const Global& g_;
    json config_;
    std::vector<json> rows_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum logarithm numerics"};
    app.require_subcommand(1);
    Global g;
    if (const char* env = std::getenv("QLOG_PRECISION_BITS")) {
        try {
            g.precision_bits = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "QLOG_PRECISION_BITS must be an integer\n";
            return 2;
        }
    }
    app.add_option("--output", g.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", g.tol, "target absolute error");
    app.add_option("--seed", g.seed, "seed for sampled suites");
    app.add_option("--precision-bits", g.precision_bits, "working precision in bits");

    std::function<void()> run;

    auto* eval = app.add_subcommand("eval", "f_g(q, z) with a certified tail bound");
    std::string e_q, e_z, e_g = "delta", e_method = "auto";
    double dc_gamma = 0, dc_tau = 2;
    long long max_terms = 2000000;
    eval->add_option("--q", e_q)->required();
    eval->add_option("--z", e_z)->required();
    eval->add_option("--g", e_g, "coefficient file or delta");
    eval->add_option("--method", e_method)->check(CLI::IsMember({"auto", "coefficient", "iterated", "bwd"}));
    eval->add_option("--dc-gamma", dc_gamma, "small divisor constant for q on the circle");
    eval->add_option("--dc-tau", dc_tau);
    eval->add_option("--max-terms", max_terms);
    eval->callback([&] {
        run = [&] {
            cplx q = parse_complex(e_q), z = parse_complex(e_z);
            EvalOptions o;
            o.method = e_method == "coefficient" ? Method::coefficient
                       : e_method == "iterated"  ? Method::iterated
                       : e_method == "bwd"       ? Method::bwd
                                                 : Method::automatic;
            if (dc_gamma > 0) o.dc = SmallDivisorBound{dc_gamma, dc_tau};
            o.max_terms = max_terms;
            auto gs = load_g(e_g);
            auto r = gs.is_delta ? eval_f_delta(make_point(q, z), g.tol, o) : eval_f_g(gs, make_point(q, z), g.tol, o);
            Emitter em(g, "eval",
                       {{"q", cstr(q)}, {"z", cstr(z)}, {"g", e_g}, {"method", e_method}, {"dc_gamma", dc_gamma},
                        {"dc_tau", dc_tau}, {"max_terms", max_terms}});
            em.add({{"value", cstr(r.value)}, {"tail_bound", r.error}, {"route", method_name(r.method)}, {"terms", r.terms}});
            em.flush();
        };
    });

    auto* reso = app.add_subcommand("resonance", "Borel-Laplace resummation at a root of unity");
    long long n0 = 0, m0 = 1;
    std::string r_g = "delta", r_z = "0.5", r_eta = "0.05,-0.05";
    reso->add_option("--n0", n0);
    reso->add_option("--m0", m0);
    reso->add_option("--g", r_g);
    reso->add_option("--z", r_z);
    reso->add_option("--eta-grid", r_eta, "comma separated complex eta");
    reso->callback([&] {
        run = [&] {
            auto res = make_resonance(n0, m0);
            auto gs = load_g(r_g);
            cplx z = parse_complex(r_z);
            auto etas = parse_complex_list(r_eta);
            for (cplx eta : etas)
                if (eta.real() == 0) throw InvalidArgument("eta grid contains a point with Re eta = 0");
            Emitter em(g, "resonance", {{"n0", n0}, {"m0", m0}, {"g", r_g}, {"z", cstr(z)}, {"eta_grid", r_eta}});
            for (cplx eta : etas) {
                auto r = resum(res, gs, eta, z, g.tol);
                auto d = eval_f_g(gs, make_point(res.Lambda0 * std::exp(eta), z), g.tol);
                em.add({{"eta", cstr(eta)},
                        {"resummed", cstr(r.value)},
                        {"resummed_error", r.error},
                        {"direct", cstr(d.value)},
                        {"direct_error", d.error},
                        {"abs_diff", std::abs(r.value - d.value)},
                        {"ray_angle", r.theta}});
            }
            em.flush();
        };
    });

    auto* gam = app.add_subcommand("gammel", "Gammel series experiments");
    std::string g_action = "constant", g_q = "2", g_eta = "0.05,-0.05";
    long long g_mmax = 80;
    int g_n = 20;
    gam->add_option("action", g_action, "constant, taylor, eval, continuation")
        ->check(CLI::IsMember({"constant", "taylor", "eval", "continuation"}));
    gam->add_option("--mmax", g_mmax);
    gam->add_option("--n", g_n, "number of Taylor coefficients");
    gam->add_option("--q", g_q);
    gam->add_option("--eta-grid", g_eta);
    gam->callback([&] {
        run = [&] {
            Emitter em(g, "gammel", {{"action", g_action}, {"mmax", g_mmax}, {"n", g_n}, {"q", g_q}, {"eta_grid", g_eta}});
            if (g_action == "constant") {
                auto k = gammel_constant(g_mmax);
                em.add({{"value", k.value}, {"error", k.tail + 1.2e-16 * k.value}});
            } else if (g_action == "taylor") {
                if (g_n < 1) throw InvalidArgument("--n must be >= 1");
                auto c = g_taylor_of_G(g_n - 1);
                for (int n = 0; n < g_n; ++n) {
                    const auto& v = c[static_cast<std::size_t>(n)];
                    em.add({{"n", n}, {"value", mpstr(v)}, {"error", 1e-80}});
                }
            } else if (g_action == "eval") {
                auto r = G_eval(parse_complex(g_q), g.tol);
                em.add({{"value", cstr(r.value)}, {"error", r.error}});
            } else {
                auto gs = build_g(64);
                for (auto& r : resonance_continuation(gs, parse_complex_list(g_eta), 0.999, g.tol))
                    em.add({{"eta", cstr(r.eta)},
                            {"resummed", cstr(r.resummed)},
                            {"direct", cstr(r.direct)},
                            {"abs_diff", r.diff},
                            {"error", r.error}});
            }
            em.flush();
        };
    });

    auto* pad = app.add_subcommand("pade", "Pade continuation of the Gammel series");
    std::string p_ns = "4,8,12,16";
    double p_q = 2;
    pad->add_option("--ns", p_ns);
    pad->add_option("--q", p_q, "real evaluation point");
    pad->callback([&] {
        run = [&] {
            std::vector<int> Ns;
            for (long long v : parse_int_list(p_ns)) {
                if (v < 0 || v > 40) throw InvalidArgument("Pade order must lie in [0, 40]");
                Ns.push_back(static_cast<int>(v));
            }
            if (std::abs(std::abs(p_q) - 1) < 1e-12) throw NearResonance("q on the unit circle");
            Emitter em(g, "pade", {{"ns", p_ns}, {"q", p_q}});
            auto ref = G_eval_mp(MpReal(p_q));
            for (auto& r : pade_continuation(Ns, p_q))
                em.add({{"N", r.N},
                        {"value", r.value},
                        {"error_vs_reference", r.error},
                        {"reference", mpstr(ref)},
                        {"reference_error", 1e-70},
                        {"residual", r.residual},
                        {"min_pivot", r.min_pivot}});
            em.flush();
        };
    });

    auto* lag = app.add_subcommand("lagrange", "one-sided Lagrange constants of a quadratic irrational");
    std::string l_poly = "1,1,-1";
    long long l_dmax = 100000;
    int l_eps = 0;
    lag->add_option("--poly", l_poly, "a,b,c of a X^2 + b X + c");
    lag->add_option("--dmax", l_dmax);
    lag->add_option("--eps", l_eps, "root selector +1/-1, 0 picks the root in (0,1)");
    lag->callback([&] {
        run = [&] {
            auto q = parse_poly(l_poly, l_eps);
            auto sd = spectral_constants(q, l_dmax);
            Emitter em(g, "lagrange", {{"poly", l_poly}, {"dmax", l_dmax}, {"eps", q.eps}});
            em.add({{"alpha", q.alpha.str(20)},
                    {"nu_plus", sd.nu_plus},
                    {"nu_plus_error", 4e-16 * sd.nu_plus},
                    {"nu_minus", sd.nu_minus},
                    {"nu_minus_error", 4e-16 * sd.nu_minus},
                    {"kappa_plus", sd.kappa_plus},
                    {"kappa_plus_error", 4e-16 * sd.kappa_plus},
                    {"kappa_minus", sd.kappa_minus},
                    {"kappa_minus_error", 4e-16 * sd.kappa_minus},
                    {"r_plus", sd.r_plus},
                    {"r_minus", sd.r_minus},
                    {"recurring_plus", sd.a_seq_plus.size()},
                    {"recurring_minus", sd.a_seq_minus.size()},
                    {"d_warm", sd.d_warm},
                    {"delta0", sd.delta0}});
            em.flush();
        };
    });

    auto* dom = app.add_subcommand("domains", "membership of q in the compact K_j");
    std::string d_q, d_gammas = "0.1,0.05";
    double d_alpha = 1, d_kappa = 0.5, d_d = 0.1;
    std::size_t d_j = 0;
    long long d_mmax = 50;
    dom->add_option("--q", d_q)->required();
    dom->add_option("--gammas", d_gammas, "decreasing gamma_j sequence");
    dom->add_option("--alpha", d_alpha);
    dom->add_option("--kappa", d_kappa);
    dom->add_option("--d", d_d);
    dom->add_option("--j", d_j);
    dom->add_option("--mmax", d_mmax);
    dom->callback([&] {
        run = [&] {
            CompactSpec cs{parse_real_list(d_gammas), d_alpha, d_kappa, d_d};
            cs.validate();
            cplx q = parse_complex(d_q);
            auto r = in_kj(q, cs, d_j, d_mmax);
            Emitter em(g, "domains",
                       {{"q", cstr(q)}, {"gammas", d_gammas}, {"alpha", d_alpha}, {"kappa", d_kappa}, {"d", d_d}, {"j", d_j},
                        {"mmax", d_mmax}});
            double mlb = measure_lower_bound(cs, d_j);
            em.add({{"member", r.member},
                    {"resolution", r.resolution},
                    {"reason", r.reason},
                    {"measure_lower_bound", mlb},
                    {"measure_lower_bound_error", 1e-15}});
            em.flush();
        };
    });

    auto* qp = app.add_subcommand("quadpoint", "Borel data at a quadratic irrational point");
    std::string qp_action = "spectral", qp_poly = "1,1,-1", qp_s = "-1", qp_h = "0+0.01i", qp_z = "0.5";
    int qp_jmax = 12, qp_kmax = 40, qp_n = 6;
    long long qp_dscan = 100000;
    qp->add_option("action", qp_action, "spectral, decomposition, laplace, odd, gevrey, singular, chain, rectangle")
        ->check(CLI::IsMember({"spectral", "decomposition", "laplace", "odd", "gevrey", "singular", "chain", "rectangle"}));
    qp->add_option("--poly", qp_poly);
    qp->add_option("--s", qp_s);
    qp->add_option("--step", qp_h, "h in q = lambda e^{2 pi i h}");
    qp->add_option("--z", qp_z);
    qp->add_option("--j-max", qp_jmax);
    qp->add_option("--k-max", qp_kmax);
    qp->add_option("--n", qp_n);
    qp->add_option("--dscan", qp_dscan);
    qp->callback([&] {
        run = [&] {
            auto d = make_quad_point(parse_poly(qp_poly, 0), parse_complex(qp_s), qp_dscan);
            Emitter em(g, "quadpoint",
                       {{"action", qp_action}, {"poly", qp_poly}, {"s", qp_s}, {"step", qp_h}, {"z", qp_z}, {"j_max", qp_jmax},
                        {"k_max", qp_kmax}, {"n", qp_n}, {"dscan", qp_dscan}});
            const auto& sd = d.spectral;
            if (qp_action == "spectral") {
                em.add({{"nu_plus", sd.nu_plus}, {"nu_minus", sd.nu_minus}, {"kappa_plus", sd.kappa_plus},
                        {"kappa_minus", sd.kappa_minus}, {"error", 4e-16}, {"lambda", cstr(d.lambda)}});
            } else if (qp_action == "decomposition") {
                cplx h = parse_complex(qp_h);
                auto cp = chi_pm_direct(d, 1, h, g.tol), cm = chi_pm_direct(d, -1, h, g.tol);
                EvalOptions eo;
                eo.dc = dc_bound(d.alpha);
                cplx z = std::exp(d.s);
                auto f1 = eval_f_delta(make_point(d.lambda * std::exp(two_pi * I * h), z), g.tol, eo);
                auto f0 = eval_f_delta(make_point(d.lambda, z), g.tol, eo);
                cplx lhs = f1.value - f0.value, rhs = (cp.value + cm.value) / (two_pi * I);
                em.add({{"lhs", cstr(lhs)},
                        {"lhs_error", f1.error + f0.error},
                        {"rhs", cstr(rhs)},
                        {"rhs_error", (cp.error + cm.error) / two_pi},
                        {"abs_diff", std::abs(lhs - rhs)}});
            } else if (qp_action == "laplace") {
                cplx h = parse_complex(qp_h);
                for (int side : {1, -1}) {
                    auto dv = chi_pm_direct(d, side, h, g.tol);
                    LaplaceOptions lo;
                    lo.tol = g.tol;
                    auto lv = chi_pm_laplace(d, side, h, lo);
                    em.add({{"side", side},
                            {"laplace", cstr(lv.value)},
                            {"laplace_error", lv.error},
                            {"direct", cstr(dv.value)},
                            {"direct_error", dv.error},
                            {"abs_diff", std::abs(lv.value - dv.value)}});
                }
            } else if (qp_action == "odd") {
                auto rep = chi_odd_coeffs(d, qp_jmax);
                for (const auto& r : rep.rows)
                    em.add({{"j", r.j},
                            {"log_abs_chi", r.log_abs_chi},
                            {"log_abs_chi_error", 1e-13},
                            {"negative", r.negative},
                            {"root", r.root},
                            {"delta", r.delta},
                            {"E", r.E},
                            {"certified", r.certified},
                            {"holds", r.holds}});
            } else if (qp_action == "gevrey") {
                auto gg = gevrey_tau_growth(d, qp_kmax, parse_complex(qp_z));
                em.add({{"tau_hat", gg.fit.tau}, {"tau_band", gg.fit.band}, {"m_used", gg.m_used}});
                for (int k = 0; k <= qp_kmax; ++k)
                    em.add({{"k", k},
                            {"log_abs", gg.log_abs[static_cast<std::size_t>(k)]},
                            {"log_tail", gg.log_tail[static_cast<std::size_t>(k)]}});
            } else if (qp_action == "singular") {
                std::vector<double> offs;
                for (int i = 1; i <= 6; ++i) offs.push_back(std::ldexp(1.0, -i));
                auto tr = singular_approach(d, 1, 0, 0, offs);
                for (std::size_t i = 0; i < tr.offsets.size(); ++i)
                    em.add({{"offset", tr.offsets[i]}, {"re_psi_hat", tr.re_values[i]}, {"tail", tr.tails[i]}});
                em.add({{"strictly_decreasing", tr.strictly_decreasing}, {"min_value", tr.min_value}, {"tail", tr.tails.back()}});
            } else if (qp_action == "chain") {
                auto ch = quad_chain_check(d, qp_n);
                for (int n = 0; n < qp_n; ++n)
                    em.add({{"n", n + 1},
                            {"F", cstr(ch.F[static_cast<std::size_t>(n)])},
                            {"G", cstr(ch.G[static_cast<std::size_t>(n)])},
                            {"chi", cstr(ch.chi[static_cast<std::size_t>(n)])}});
                em.add({{"max_chain_diff", ch.max_chain_diff}, {"max_chi_diff", ch.max_chi_diff}});
            } else {
                auto R = rec_rectangle(sd, d.lambda, parse_complex(qp_z));
                em.add({{"rotation", cstr(R.rotation)},
                        {"half_re", R.half_re},
                        {"half_im", R.half_im},
                        {"aspect", R.aspect()},
                        {"error", 1e-15}});
            }
            em.flush();
        };
    });

    auto* cfc = app.add_subcommand("cf", "continued fraction expansion");
    std::string cf_quad, cf_rat;
    std::size_t cf_depth = 10;
    int cf_eps = 1;
    auto* oq = cfc->add_option("--quadratic", cf_quad, "a,b,c: root (-b + eps sqrt(b^2-4ac)) / 2a");
    auto* orr = cfc->add_option("--rational", cf_rat, "n/m");
    oq->excludes(orr);
    cfc->add_option("--depth", cf_depth);
    cfc->add_option("--eps", cf_eps)->check(CLI::IsMember({-1, 1}));
    cfc->callback([&] {
        run = [&] {
            ContinuedFraction cf;
            if (!cf_quad.empty()) {
                auto v = parse_int_list(cf_quad);
                if (v.size() != 3 || v[0] == 0) throw InvalidArgument("--quadratic needs a,b,c with a != 0");
                BigInt a = v[0], b = v[1], c = v[2];
                BigInt disc = b * b - 4 * a * c;
                if (disc <= 0) throw InvalidArgument("discriminant must be positive");
                cf = cf_eps > 0 ? cf_expand(QuadraticSurd{-b, disc, 2 * a}, cf_depth)
                                : cf_expand(QuadraticSurd{b, disc, -2 * a}, cf_depth);
            } else if (!cf_rat.empty()) {
                auto v = split(cf_rat, '/');
                if (v.size() != 2) throw InvalidArgument("--rational needs n/m");
                cf = cf_expand(Rational(BigInt(v[0]), BigInt(v[1])), cf_depth);
            } else {
                throw InvalidArgument("give --quadratic or --rational");
            }
            Emitter em(g, "cf", {{"quadratic", cf_quad}, {"rational", cf_rat}, {"depth", cf_depth}, {"eps", cf_eps}});
            json qs = json::array();
            std::size_t n = std::min(cf_depth, cf.depth());
            for (std::size_t k = 1; k <= n; ++k) qs.push_back(cf.quotient(k).str());
            auto conv = convergents(cf, n);
            json cv = json::array();
            for (const auto& c : conv) cv.push_back(c.n.str() + "/" + c.m.str());
            em.add({{"a0", cf.a0.str()},
                    {"quotients", qs},
                    {"convergents", cv},
                    {"preperiod", cf.preperiod},
                    {"period", cf.period},
                    {"value", cf.value.str(30)},
                    {"error", 0.0}});
            em.flush();
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        run();
    } catch (const InvalidArgument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const NearResonance& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
