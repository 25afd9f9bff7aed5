#include "wsieve/sieve_weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "wsieve/arith.hpp"
#include "wsieve/errors.hpp"

namespace wsieve::sieve {

namespace {

double to_double(const mpq_class& q) { return q.get_d(); }
double to_double(double v) { return v; }

template <class Scalar>
Scalar from_rational(const mpq_class& q) {
    if constexpr (std::is_same_v<Scalar, mpq_class>)
        return q;
    else
        return q.get_d();
}

template <class Scalar>
void canonical(Scalar& v) {
    if constexpr (std::is_same_v<Scalar, mpq_class>) v.canonicalize();
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

nlohmann::json scalar_json(const mpq_class& q) { return rational_string(q); }
nlohmann::json scalar_json(double v) { return v; }

mpq_class u64_q(std::uint64_t v) { return mpq_class(mpz_class(std::to_string(v))); }

void check_budget(std::uint64_t used, std::uint64_t budget, const char* what) {
    if (used > budget)
        throw Error(Errc::BudgetExceeded, std::string(what) + " exceeds budget of " +
                                              std::to_string(budget));
}

}  // namespace

RichertWeights::RichertWeights(double b_, double y_, double z_) : b(b_), y(y_), z(z_) {
    if (!(b > 0)) throw Error(Errc::DomainError, "Richert weights need b > 0");
    if (!(y < z)) throw Error(Errc::DomainError, "Richert weights need y < z");
}

double richert_a(const RichertWeights& W, std::uint64_t d) {
    if (d == 0) throw Error(Errc::DomainError, "a_d needs d >= 1");
    if (d == 1) return W.b;
    const double p = static_cast<double>(d);
    if (p >= W.z || !arith::is_prime64(d)) return 0.0;
    if (p < W.y) return -W.b;
    return -std::log(W.z / p) / std::log(W.z);
}

Support::Support(double xi, double z_prime, std::uint64_t budget) : xi_(xi), z_prime_(z_prime) {
    if (!(xi > 1)) throw Error(Errc::SupportEmpty, "support needs xi > 1");
    if (z_prime > 2) primes_ = arith::primes_below(static_cast<std::uint64_t>(std::ceil(z_prime)));
    while (!primes_.empty() && primes_.back() >= z_prime) primes_.pop_back();

    std::vector<std::pair<std::uint64_t, std::vector<std::uint32_t>>> found;
    std::vector<std::uint32_t> stack;
    std::uint64_t nodes = 0;
    auto dfs = [&](auto&& self, std::uint64_t m, std::size_t start) -> void {
        check_budget(++nodes, budget, "support enumeration");
        found.emplace_back(m, stack);
        for (std::size_t i = start; i < primes_.size(); ++i) {
            if (static_cast<double>(m) * primes_[i] >= xi) break;
            stack.push_back(primes_[i]);
            self(self, m * primes_[i], i + 1);
            stack.pop_back();
        }
    };
    dfs(dfs, 1, 0);
    std::sort(found.begin(), found.end());
    for (auto& [m, ps] : found) {
        index_.emplace(m, elements_.size());
        elements_.push_back(m);
        factors_.push_back(std::move(ps));
    }
}

std::optional<std::size_t> Support::find(std::uint64_t m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

template <class Scalar>
std::vector<Scalar> lambda_from_zeta(const Support& S, const std::vector<mpq_class>& f,
                                     const std::vector<mpq_class>& f_prime,
                                     const std::vector<Scalar>& zeta) {
    const auto& el = S.elements();
    std::vector<Scalar> lambda(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) {
        Scalar sum = 0;
        for (std::size_t j = i; j < el.size(); ++j) {
            if (el[j] % el[i] != 0) continue;
            if (f_prime[j] == 0) throw Error(Errc::DivisionByZero, "f'(m) = 0 on the support");
            sum += zeta[j] / from_rational<Scalar>(f_prime[j]);
        }
        const int sign = S.primes_of(i).size() % 2 == 0 ? 1 : -1;
        lambda[i] = sign * from_rational<Scalar>(f[i]) * sum;
        canonical(lambda[i]);
    }
    return lambda;
}

template <class Scalar>
std::vector<Scalar> zeta_from_lambda(const Support& S, const std::vector<mpq_class>& f,
                                     const std::vector<mpq_class>& f_prime,
                                     const std::vector<Scalar>& lambda) {
    const auto& el = S.elements();
    std::vector<Scalar> zeta(el.size());
    for (std::size_t i = 0; i < el.size(); ++i) {
        Scalar sum = 0;
        for (std::size_t j = i; j < el.size(); ++j) {
            if (el[j] % el[i] != 0) continue;
            if (f[j] == 0) throw Error(Errc::DivisionByZero, "f(m) = 0 on the support");
            sum += lambda[j] / from_rational<Scalar>(f[j]);
        }
        const int sign = S.primes_of(i).size() % 2 == 0 ? 1 : -1;
        zeta[i] = sign * from_rational<Scalar>(f_prime[i]) * sum;
        canonical(zeta[i]);
    }
    return zeta;
}

template <class Scalar>
LambdaSystemT<Scalar>::LambdaSystemT(const tuple::LinearSystem& L, Support support)
    : support_(std::move(support)) {
    const auto n = support_.size();
    check_budget(static_cast<std::uint64_t>(n) * n, kDefaultBudget * 10, "lambda system size");
    f_.reserve(n);
    f_prime_.reserve(n);
    for (std::uint64_t m : support_.elements()) {
        auto fv = tuple::f_values(L, m);
        if (fv.f_prime == 0) throw Error(Errc::DivisionByZero, "f'(m) = 0 on the support");
        f_.push_back(fv.f);
        f_prime_.push_back(fv.f_prime);
    }
}

template <class Scalar>
LambdaSystemT<Scalar> LambdaSystemT<Scalar>::from_zeta(const tuple::LinearSystem& L,
                                                       Support support, std::vector<Scalar> zeta) {
    LambdaSystemT S(L, std::move(support));
    if (zeta.size() != S.support_.size())
        throw Error(Errc::DomainError, "zeta does not match the support");
    S.zeta_ = std::move(zeta);
    S.lambda_ = lambda_from_zeta(S.support_, S.f_, S.f_prime_, S.zeta_);
    if (S.lambda_[0] == 0) throw Error(Errc::DomainError, "lambda_1 = 0");
    return S;
}

template <class Scalar>
LambdaSystemT<Scalar> LambdaSystemT<Scalar>::from_lambda(const tuple::LinearSystem& L,
                                                         Support support,
                                                         std::vector<Scalar> lambda) {
    LambdaSystemT S(L, std::move(support));
    if (lambda.size() != S.support_.size())
        throw Error(Errc::DomainError, "lambda does not match the support");
    if (lambda[0] == 0) throw Error(Errc::DomainError, "lambda_1 = 0");
    S.lambda_ = std::move(lambda);
    S.zeta_ = zeta_from_lambda(S.support_, S.f_, S.f_prime_, S.lambda_);
    return S;
}

template <class Scalar>
Scalar LambdaSystemT<Scalar>::zeta_at(std::uint64_t m) const {
    auto i = support_.find(m);
    return i ? zeta_[*i] : Scalar(0);
}

template <class Scalar>
Scalar LambdaSystemT<Scalar>::lambda_at(std::uint64_t m) const {
    auto i = support_.find(m);
    return i ? lambda_[*i] : Scalar(0);
}

template <class Scalar>
Scalar LambdaSystemT<Scalar>::lambda_normalized(std::size_t i) const {
    Scalar v = lambda_.at(i) / lambda_[0];
    canonical(v);
    return v;
}

template <class Scalar>
std::string LambdaSystemT<Scalar>::to_json() const {
    nlohmann::json j;
    j["xi"] = support_.xi();
    j["z_prime"] = support_.z_prime();
    j["exact"] = std::is_same_v<Scalar, mpq_class>;
    j["support"] = support_.elements();
    auto& zs = j["zeta"] = nlohmann::json::array();
    auto& ls = j["lambda"] = nlohmann::json::array();
    for (std::size_t i = 0; i < support_.size(); ++i) {
        zs.push_back(scalar_json(zeta_[i]));
        ls.push_back(scalar_json(lambda_[i]));
    }
    return j.dump(2);
}

template class LambdaSystemT<mpq_class>;
template class LambdaSystemT<double>;
template std::vector<mpq_class> lambda_from_zeta(const Support&, const std::vector<mpq_class>&,
                                                 const std::vector<mpq_class>&,
                                                 const std::vector<mpq_class>&);
template std::vector<double> lambda_from_zeta(const Support&, const std::vector<mpq_class>&,
                                              const std::vector<mpq_class>&,
                                              const std::vector<double>&);
template std::vector<mpq_class> zeta_from_lambda(const Support&, const std::vector<mpq_class>&,
                                                 const std::vector<mpq_class>&,
                                                 const std::vector<mpq_class>&);
template std::vector<double> zeta_from_lambda(const Support&, const std::vector<mpq_class>&,
                                              const std::vector<mpq_class>&,
                                              const std::vector<double>&);

std::vector<double> zeta_from_poly(const moments::SievePolynomial& P, const Support& S) {
    const double lz = std::log(S.z_prime());
    std::vector<double> zeta;
    zeta.reserve(S.size());
    for (std::uint64_t r : S.elements()) {
        const double w = std::log(S.xi() / static_cast<double>(r)) / lz;
        zeta.push_back(P.star(w));
    }
    return zeta;
}

std::vector<mpq_class> zeta_from_rational_poly(const std::vector<mpq_class>& coefficients,
                                               const Support& S, int denominator_bits) {
    if (denominator_bits < 1 || denominator_bits > 52)
        throw Error(Errc::DomainError, "denominator_bits must be in 1..52");
    const double scale = std::ldexp(1.0, denominator_bits);
    const double lz = std::log(S.z_prime());
    std::vector<mpq_class> zeta;
    zeta.reserve(S.size());
    for (std::uint64_t r : S.elements()) {
        const double w = std::log(S.xi() / static_cast<double>(r)) / lz;
        mpq_class wq(mpz_class(static_cast<long>(std::llround(w * scale))),
                     mpz_class(1) << denominator_bits);
        wq.canonicalize();
        mpq_class v = 0;
        if (wq >= 0)
            for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * wq + *it;
        v.canonicalize();
        zeta.push_back(v);
    }
    return zeta;
}

GSumResult G_sum(const tuple::LinearSystem& L, double xi, double z_prime, std::uint64_t budget) {
    GSumResult out;
    if (!(xi > 1)) throw Error(Errc::SupportEmpty, "G needs xi > 1");
    std::vector<std::uint32_t> ps;
    if (z_prime > 2) ps = arith::primes_below(static_cast<std::uint64_t>(std::ceil(z_prime)));
    while (!ps.empty() && ps.back() >= z_prime) ps.pop_back();
    std::vector<double> g(ps.size()), prefix(ps.size() + 1, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::uint64_t r = tuple::rho_prime(L, ps[i]);
        if (r >= ps[i]) throw Error(Errc::DivisionByZero, "f'(p) = 0 at p = " + std::to_string(ps[i]));
        g[i] = static_cast<double>(r) / static_cast<double>(ps[i] - r);
        prefix[i + 1] = prefix[i] + g[i];
    }
    // Number of primes p with m p < xi.
    auto count_below = [&](double m) {
        return static_cast<std::size_t>(
            std::partition_point(ps.begin(), ps.end(), [&](std::uint32_t p) { return m * p < xi; }) -
            ps.begin());
    };
    auto dfs = [&](auto&& self, double m, double val, std::size_t start) -> double {
        check_budget(++out.nodes, budget, "G enumeration");
        const std::size_t k = count_below(m);
        double sum = 0;
        std::size_t i = start;
        for (; i < k; ++i) {
            if (i + 1 >= ps.size() || m * ps[i] * ps[i + 1] >= xi) break;
            sum += val * g[i] + self(self, m * ps[i], val * g[i], i + 1);
        }
        if (i < k) sum += val * (prefix[k] - prefix[i]);
        return sum;
    };
    out.value = 1.0 + dfs(dfs, 1.0, 1.0, 0);
    return out;
}

mpq_class G_sum_exact(const tuple::LinearSystem& L, double xi, double z_prime, std::uint64_t budget) {
    Support S(xi, z_prime, budget);
    mpq_class sum = 0;
    for (std::uint64_t m : S.elements()) sum += 1 / tuple::f_values(L, m).f_prime;
    sum.canonicalize();
    return sum;
}

GComparison g_compare(const tuple::LinearSystem& L, double xi, double z_prime,
                      const dde::JFunction& J, std::uint64_t budget) {
    if (J.kappa() != L.kappa()) throw Error(Errc::DomainError, "j_kappa does not match the system");
    GComparison c;
    c.G = G_sum(L, xi, z_prime, budget).value;
    c.V = tuple::V_product(L, z_prime);
    c.tau = std::log(xi) / std::log(z_prime);
    c.j_tau = dde::eval_j(J, c.tau, 0);
    c.ratio = c.G * c.V / c.j_tau;
    return c;
}

SieveInstance::SieveInstance(tuple::LinearSystem L, std::uint64_t x) : L_(std::move(L)), x_(x) {
    if (x < 1) throw Error(Errc::DomainError, "instance needs x >= 1");
    if (x > 1'000'000) throw Error(Errc::BudgetExceeded, "instance needs x <= 1e6");
}

std::uint64_t SieveInstance::count_divisible(std::uint64_t d) const {
    if (d == 0) throw Error(Errc::DomainError, "|A_0| is undefined");
    std::uint64_t count = 0;
    for (std::uint64_t c : tuple::roots_mod(L_, d)) {
        const std::uint64_t first = c == 0 ? d : c;
        if (first <= x_) count += (x_ - first) / d + 1;
    }
    return count;
}

mpq_class SieveInstance::remainder(std::uint64_t d) const {
    auto it = cache_.find(d);
    if (it != cache_.end()) return it->second;
    const auto roots = tuple::roots_mod(L_, d).size();
    mpq_class R = u64_q(count_divisible(d)) - u64_q(x_) * u64_q(roots) / u64_q(d);
    R.canonicalize();
    cache_.emplace(d, R);
    return R;
}

template <class Scalar>
Decomposition decompose(const SieveInstance& inst, const RichertWeights& W,
                        const LambdaSystemT<Scalar>& S, std::uint64_t budget) {
    const auto& L = inst.system();
    const Support& sup = S.support();
    const auto& el = sup.elements();
    const std::uint64_t x = inst.x();

    // d ranges over 1 and the primes below z; a_d vanishes elsewhere.
    std::vector<std::uint64_t> D{1};
    if (W.z > 2)
        for (std::uint32_t p : arith::primes_below(static_cast<std::uint64_t>(std::ceil(W.z))))
            if (p < W.z) D.push_back(p);
    const std::size_t nd = D.size();
    check_budget(x * nd + static_cast<std::uint64_t>(el.size()) * el.size() * nd, budget,
                 "decomposition");

    // Root tables for all primes that can divide some d or nu.
    std::vector<std::uint32_t> primes;
    {
        const double top = std::max(W.z, sup.z_prime());
        if (top > 2)
            for (std::uint32_t p : arith::primes_below(static_cast<std::uint64_t>(std::ceil(top))))
                if (p < top) primes.push_back(p);
    }
    std::vector<std::vector<char>> is_root(primes.size());
    for (std::size_t k = 0; k < primes.size(); ++k) {
        is_root[k].assign(primes[k], 0);
        for (std::uint64_t c : tuple::roots_mod_prime(L, primes[k])) is_root[k][c] = 1;
    }
    std::map<std::uint64_t, std::size_t> d_index;
    for (std::size_t k = 0; k < nd; ++k) d_index[D[k]] = k;

    std::vector<Scalar> lhs(nd, Scalar(0)), main(nd, Scalar(0)), err(nd, Scalar(0));
    double relaxed_extra = 0;  // terms with d | m, weighted by a_d already

    // Left side by enumeration of n.
    std::vector<std::uint32_t> divs;
    for (std::uint64_t n = 1; n <= x; ++n) {
        divs.clear();
        for (std::size_t k = 0; k < primes.size(); ++k)
            if (is_root[k][n % primes[k]]) divs.push_back(primes[k]);
        Scalar s = 0;
        auto dfs = [&](auto&& self, std::uint64_t m, std::size_t start) -> void {
            s += S.lambda()[*sup.find(m)];
            for (std::size_t i = start; i < divs.size(); ++i) {
                if (divs[i] >= sup.z_prime()) break;
                if (static_cast<double>(m) * divs[i] >= sup.xi()) break;
                self(self, m * divs[i], i + 1);
            }
        };
        dfs(dfs, 1, 0);
        Scalar sq = s * s;
        lhs[0] += sq;
        for (std::uint32_t p : divs) {
            auto it = d_index.find(p);
            if (it != d_index.end()) lhs[it->second] += sq;
        }
    }

    // Main term.
    for (std::size_t k = 0; k < nd; ++k) {
        const std::uint64_t d = D[k];
        const mpq_class inv_f = d == 1 ? mpq_class(1)
                                       : mpq_class(static_cast<unsigned long>(tuple::rho_prime(L, d)),
                                                   static_cast<unsigned long>(d));
        Scalar sum = 0, extra = 0;
        for (std::size_t i = 0; i < el.size(); ++i) {
            const Scalar inv_fp = from_rational<Scalar>(1 / S.f_prime()[i]);
            if (d == 1) {
                sum += S.zeta()[i] * S.zeta()[i] * inv_fp;
            } else if (el[i] % d != 0) {
                const Scalar t = S.zeta()[i] - S.zeta_at(el[i] * d);
                sum += t * t * inv_fp;
            } else {
                extra += S.zeta()[i] * S.zeta()[i] * inv_fp;
            }
        }
        main[k] = sum * from_rational<Scalar>(inv_f);
        relaxed_extra += richert_a(W, d) * to_double(extra * from_rational<Scalar>(inv_f));
    }

    // Error term grouped by m = [d, nu1, nu2].
    for (std::size_t k = 0; k < nd; ++k) {
        const std::uint64_t d = D[k];
        std::map<std::uint64_t, Scalar> coef;
        for (std::size_t i = 0; i < el.size(); ++i) {
            const std::uint64_t di = std::lcm(d, el[i]);
            for (std::size_t j = 0; j < el.size(); ++j)
                coef[std::lcm(di, el[j])] += S.lambda()[i] * S.lambda()[j];
        }
        Scalar e = 0;
        for (auto& [m, c] : coef)
            if (c != 0) e += c * from_rational<Scalar>(inst.remainder(m));
        err[k] = e;
    }

    Decomposition out;
    const Scalar X = static_cast<Scalar>(static_cast<double>(x));
    bool exact_ok = true;
    double residual = 0;
    for (std::size_t k = 0; k < nd; ++k) {
        const double a = richert_a(W, D[k]);
        out.lhs += a * to_double(lhs[k]);
        out.main += a * to_double(main[k]);
        out.error += a * to_double(err[k]);
        if constexpr (std::is_same_v<Scalar, mpq_class>) {
            mpq_class bracket = lhs[k] - X * main[k] - err[k];
            bracket.canonicalize();
            if (bracket != 0) exact_ok = false;
            residual += a * bracket.get_d();
        }
    }
    out.main_relaxed = out.main + relaxed_extra;
    if constexpr (std::is_same_v<Scalar, mpq_class>) {
        out.exact_identity = exact_ok;
        out.residual = residual;
    } else {
        out.residual = out.lhs - (static_cast<double>(x) * out.main + out.error);
    }
    return out;
}

template Decomposition decompose(const SieveInstance&, const RichertWeights&,
                                 const LambdaSystemT<mpq_class>&, std::uint64_t);
template Decomposition decompose(const SieveInstance&, const RichertWeights&,
                                 const LambdaSystemT<double>&, std::uint64_t);

double error_bound_analytic(const tuple::LinearSystem& L, double z, double xi) {
    const double V = z >= 2 ? tuple::V_product(L, z) : 1.0;
    return z * xi * xi * std::pow(V, -7.0);
}

}  // namespace wsieve::sieve
