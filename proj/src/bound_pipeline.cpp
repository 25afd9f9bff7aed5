#include "wsieve/bound_pipeline.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "wsieve/errors.hpp"
#include "wsieve/format.hpp"
#include "wsieve/special.hpp"

namespace wsieve::bound {

namespace {

double floor_value(int kappa) { return 2.0 * kappa - 10.0 / 9.0; }

long smallest_integer_above(double v) { return static_cast<long>(std::floor(v)) + 1; }

double b_of(int kappa, long r, double U, double eps) {
    return static_cast<double>(r) + 1.0 - kappa * U - eps;
}

}  // namespace

SieveParameters choose_params(int kappa, long r, double u, double l, const ParamOptions& o) {
    if (kappa < 2) throw Error(Errc::DomainError, "parameters need kappa >= 2");
    if (!(l >= 1)) throw Error(Errc::DomainError, "parameters need l >= 1");
    if (!(u > 0) || u > l) throw Error(Errc::DomainError, "parameters need 0 < u <= l");
    if (o.delta < 0 || o.eps < 0) throw Error(Errc::DomainError, "slacks must be nonnegative");
    SieveParameters p;
    p.kappa = kappa;
    p.u = u;
    p.l = l;
    p.delta = o.delta;
    p.eps = o.eps;
    p.alpha = o.alpha;
    p.U = 1.0 + 2.0 * u / l + o.delta;
    p.V = l * p.U;
    if (!(1.0 / p.U < 1.0 - 1.0 / p.alpha))
        throw Error(Errc::DomainError, "alpha too small: need 1/U < 1 - 1/alpha");
    p.r = r;
    p.b = b_of(kappa, r, p.U, o.eps);
    if (!(p.b > 0))
        throw Error(Errc::InfeasibleB, "b = " + fmt_num(p.b) + " <= 0 for r = " + std::to_string(r));
    if (!(static_cast<double>(r) > floor_value(kappa)))
        throw Error(Errc::InfeasibleB, "r = " + std::to_string(r) + " does not exceed 2 kappa - 10/9");
    return p;
}

SieveParameters choose_params(int kappa, long r, const ParamOptions& o) {
    return choose_params(kappa, r, kappa - 1.0 / 9.0, 2.0 * kappa, o);
}

double linear_coefficient() { return 1.0 + special::kEulerGamma / 2.0 + std::log(4.0); }

ExplicitTerms explicit_terms(int kappa, double slack) {
    if (kappa < 2) throw Error(Errc::DomainError, "explicit bound needs kappa >= 2");
    const double k = kappa;
    ExplicitTerms t;
    t.half_klogk = 0.5 * k * std::log(k);
    t.linear = linear_coefficient() * k;
    t.sqrt_term = 13.0 / 18.0 * std::sqrt(k / special::kPi);
    t.slack = slack * std::log(k);
    return t;
}

long r_bound_explicit(int kappa, double slack) {
    const double main = explicit_terms(kappa, slack).total();
    return std::max(smallest_integer_above(main), smallest_integer_above(floor_value(kappa)));
}

double NumericBound::margin(long r_value, const ParamOptions& o) const {
    const double U = 1.0 + 2.0 * u / l + o.delta;
    return b_of(kappa, r_value, U, o.eps) * I1 - kappa * I2 - kappa * I3;
}

NumericBound r_bound_numeric(const dde::JFunction& J, double l, double u,
                             const moments::SievePolynomial& P, const ParamOptions& o,
                             int curve_halfwidth) {
    const auto I = moments::main_integrals(J, u, l, P);
    NumericBound nb;
    nb.kappa = J.kappa();
    nb.u = u;
    nb.l = l;
    nb.I1 = I.I1;
    nb.I2 = I.I2;
    nb.I3 = I.I3;
    if (!(I.I1 > 0)) throw Error(Errc::DomainError, "I1 must be positive");
    const double U = 1.0 + 2.0 * u / l + o.delta;
    // margin(r) = (r + 1 - kappa U - eps) I1 - kappa (I2 + I3) is linear in r.
    nb.r_continuous = nb.kappa * (I.I2 + I.I3) / I.I1 - 1.0 + nb.kappa * U + o.eps;
    nb.r = std::max(smallest_integer_above(nb.r_continuous),
                    smallest_integer_above(floor_value(nb.kappa)));
    for (long r = nb.r - curve_halfwidth; r <= nb.r + curve_halfwidth; ++r)
        nb.curve.push_back({r, nb.margin(r, o)});
    return nb;
}

NumericBound r_bound_numeric(int kappa, const ParamOptions& o) {
    if (kappa < 2) throw Error(Errc::DomainError, "numeric bound needs kappa >= 2");
    const double u = kappa - 1.0 / 9.0;
    const auto J = dde::solve_j(kappa, u);
    return r_bound_numeric(J, 2.0 * kappa, u, moments::SievePolynomial::constant_one(u), o);
}

double reduced_margin(const dde::JFunction& J, double u, double l, long r, const ParamOptions& o) {
    const int kappa = J.kappa();
    const double j0 = moments::moment_J1(J, u, 0).numeric;
    const double j1 = moments::moment_J1(J, u, 1).numeric;
    const double j2 = moments::moment_J2(J, u).numeric;
    const double r1 = j1 / j0, r2 = j2 / j0;
    const double U = 1.0 + 2.0 * u / l + o.delta;
    const double b = b_of(kappa, r, U, o.eps);
    return j0 * (b - (kappa * (std::log(l) - 1.0) - kappa * r2 + kappa / l * r1));
}

std::vector<BoundRow> table(const std::vector<int>& kappas, double slack, const ParamOptions& o,
                            unsigned threads) {
    std::vector<BoundRow> rows(kappas.size());
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        rows[i].kappa = kappas[i];
        rows[i].terms = explicit_terms(kappas[i], slack);
        rows[i].r_explicit = r_bound_explicit(kappas[i], slack);
    }
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < rows.size();) {
            BoundRow& row = rows[i];
            if (row.kappa > kNumericKappaLimit) {
                row.numeric_note = "kappa>" + std::to_string(kNumericKappaLimit);
                continue;
            }
            try {
                const auto nb = r_bound_numeric(row.kappa, o);
                row.r_numeric = nb.r;
                row.margin_at_r = nb.margin(row.r_explicit, o);
            } catch (const Error& e) {
                if (!is_resource_error(e.code())) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
                row.numeric_note = errc_name(e.code());
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string table_csv(const std::vector<BoundRow>& rows) {
    std::string out = "kappa,r_explicit,r_numeric,term_half_klogk,term_linear,term_sqrt,margin_at_r\n";
    for (const auto& r : rows) {
        out += std::to_string(r.kappa) + "," + std::to_string(r.r_explicit) + "," +
               (r.r_numeric ? std::to_string(*r.r_numeric) : "NA:" + r.numeric_note) + "," +
               fmt_num(r.terms.half_klogk) + "," + fmt_num(r.terms.linear) + "," +
               fmt_num(r.terms.sqrt_term) + "," + fmt_num(r.margin_at_r) + "\n";
    }
    return out;
}

std::string table_json(const std::vector<BoundRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["kappa"] = r.kappa;
        j["r_explicit"] = r.r_explicit;
        j["r_numeric"] = r.r_numeric ? nlohmann::json(*r.r_numeric) : nlohmann::json(nullptr);
        if (!r.r_numeric) j["r_numeric_note"] = r.numeric_note;
        j["term_half_klogk"] = r.terms.half_klogk;
        j["term_linear"] = r.terms.linear;
        j["term_sqrt"] = r.terms.sqrt_term;
        j["term_slack"] = r.terms.slack;
        j["margin_at_r"] = r.margin_at_r ? nlohmann::json(*r.margin_at_r) : nlohmann::json(nullptr);
        arr.push_back(j);
    }
    return arr.dump(2);
}

std::vector<LScanPoint> l_scan(int kappa, const std::vector<double>& ls, const ParamOptions& o) {
    const double u = kappa - 1.0 / 9.0;
    const auto J = dde::solve_j(kappa, u);
    const auto P = moments::SievePolynomial::constant_one(u);
    std::vector<LScanPoint> out;
    for (double l : ls) {
        const auto nb = r_bound_numeric(J, l, u, P, o, 0);
        out.push_back({l, nb.r, nb.r_continuous});
    }
    return out;
}

}  // namespace wsieve::bound
