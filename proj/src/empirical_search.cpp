#include "wsieve/empirical_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wsieve/arith.hpp"
#include "wsieve/errors.hpp"

namespace wsieve::search {

namespace {

std::uint64_t abs_value(const tuple::Form& f, std::uint64_t n) {
    const __int128 v = static_cast<__int128>(f.a) * static_cast<__int128>(n) + f.b;
    return static_cast<std::uint64_t>(v < 0 ? -v : v);
}

struct FormSieve {
    tuple::Form form;
    std::vector<std::uint32_t> primes;  // primes with a root
    std::vector<std::uint32_t> roots;   // n = root (mod p)
};

// Per-segment counts indexed by Omega, plus the excluded count at the end.
using Counts = std::vector<std::uint64_t>;

void sieve_segment(const std::vector<FormSieve>& forms, std::uint64_t lo, std::uint64_t hi,
                   Counts& counts, std::uint64_t& excluded, std::vector<std::uint64_t>& rem,
                   std::vector<int>& omega, std::vector<char>& zero) {
    const std::size_t len = hi - lo;
    omega.assign(len, 0);
    zero.assign(len, 0);
    rem.resize(len);
    for (const FormSieve& fs : forms) {
        for (std::size_t k = 0; k < len; ++k) {
            rem[k] = abs_value(fs.form, lo + k);
            if (rem[k] == 0) zero[k] = 1;
        }
        for (std::size_t t = 0; t < fs.primes.size(); ++t) {
            const std::uint64_t p = fs.primes[t];
            const std::uint64_t r = fs.roots[t];
            std::uint64_t first = lo + (r + p - lo % p) % p;
            for (std::uint64_t n = first; n < hi; n += p) {
                const std::size_t k = n - lo;
                if (rem[k] == 0) continue;
                do {
                    rem[k] /= p;
                    ++omega[k];
                } while (rem[k] % p == 0);
            }
        }
        for (std::size_t k = 0; k < len; ++k)
            if (rem[k] > 1) ++omega[k];
    }
    for (std::size_t k = 0; k < len; ++k) {
        if (zero[k]) {
            ++excluded;
            continue;
        }
        const auto w = static_cast<std::size_t>(omega[k]);
        if (w >= counts.size()) counts.resize(w + 1, 0);
        ++counts[w];
    }
}

}  // namespace

std::uint64_t OmegaHistogram::total() const {
    std::uint64_t t = excluded;
    for (const auto& [w, c] : counts) t += c;
    return t;
}

int OmegaHistogram::max_omega() const { return counts.empty() ? -1 : counts.rbegin()->first; }

OmegaHistogram omega_profile(const tuple::LinearSystem& L, std::uint64_t x, const SearchOptions& o) {
    OmegaHistogram h;
    h.x = x;
    if (x == 0) return h;
    if (x > o.x_cap)
        throw Error(Errc::BudgetExceeded, "x = " + std::to_string(x) + " exceeds the cap " +
                                              std::to_string(o.x_cap));
    if (o.segment_size == 0) throw Error(Errc::DomainError, "segment size must be positive");
    for (int i = 0; i < L.kappa(); ++i) L.form_value(i, static_cast<std::int64_t>(x));

    std::uint64_t max_value = 0;
    for (const auto& f : L.forms()) max_value = std::max({max_value, abs_value(f, 1), abs_value(f, x)});
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(max_value)));
    std::uint64_t limit = root + 1;
    while (limit * limit <= max_value) ++limit;
    if (limit > o.prime_cap)
        throw Error(Errc::BudgetExceeded, "sieving primes would exceed " + std::to_string(o.prime_cap));
    const auto primes = limit >= 2 ? arith::primes_below(limit + 1) : std::vector<std::uint32_t>{};

    std::vector<FormSieve> forms;
    for (const auto& f : L.forms()) {
        FormSieve fs{f, {}, {}};
        for (std::uint32_t p : primes) {
            if (static_cast<std::uint64_t>(p) * p > max_value) break;
            if (arith::reduce_mod(f.a, p) == 0) continue;
            const std::uint64_t inv = arith::inverse_mod(f.a, p);
            const std::uint64_t minus_b = (p - arith::reduce_mod(f.b, p)) % p;
            fs.primes.push_back(p);
            fs.roots.push_back(static_cast<std::uint32_t>(arith::mulmod(minus_b, inv, p)));
        }
        forms.push_back(std::move(fs));
    }

    const std::uint64_t segments = (x + o.segment_size - 1) / o.segment_size;
    unsigned threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, segments));

    std::vector<Counts> partial(threads);
    std::vector<std::uint64_t> partial_excluded(threads, 0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&](unsigned id) {
        std::vector<std::uint64_t> rem;
        std::vector<int> omega;
        std::vector<char> zero;
        for (std::uint64_t s; (s = next++) < segments;) {
            const std::uint64_t lo = 1 + s * o.segment_size;
            const std::uint64_t hi = std::min(x + 1, lo + o.segment_size);
            sieve_segment(forms, lo, hi, partial[id], partial_excluded[id], rem, omega, zero);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (auto& t : pool) t.join();

    for (unsigned t = 0; t < threads; ++t) {
        h.excluded += partial_excluded[t];
        for (std::size_t w = 0; w < partial[t].size(); ++w)
            if (partial[t][w] != 0) h.counts[static_cast<int>(w)] += partial[t][w];
    }
    return h;
}

std::uint64_t count_at_most(const OmegaHistogram& h, int r) {
    std::uint64_t c = 0;
    for (const auto& [w, n] : h.counts)
        if (w <= r) c += n;
    return c;
}

std::uint64_t count_at_most(const tuple::LinearSystem& L, std::uint64_t x, int r,
                            const SearchOptions& o) {
    return count_at_most(omega_profile(L, x, o), r);
}

DensityReport density_report(const tuple::LinearSystem& L, std::uint64_t x, int r,
                             const SearchOptions& o) {
    if (x < 3) throw Error(Errc::DomainError, "density report needs x >= 3");
    DensityReport d;
    d.x = x;
    d.r = r;
    d.count = count_at_most(L, x, r, o);
    d.comparator = static_cast<double>(x) / std::pow(std::log(static_cast<double>(x)), L.kappa());
    d.ratio = static_cast<double>(d.count) / d.comparator;
    return d;
}

std::string histogram_csv(const OmegaHistogram& h) {
    std::string out = "omega,count\n";
    for (const auto& [w, c] : h.counts) out += std::to_string(w) + "," + std::to_string(c) + "\n";
    if (h.excluded) out += "excluded," + std::to_string(h.excluded) + "\n";
    return out;
}

std::string histogram_json(const OmegaHistogram& h) {
    nlohmann::json j;
    j["x"] = h.x;
    j["excluded"] = h.excluded;
    auto& c = j["counts"] = nlohmann::json::object();
    for (const auto& [w, n] : h.counts) c[std::to_string(w)] = n;
    return j.dump(2);
}

std::string density_json(const DensityReport& d) {
    nlohmann::json j;
    j["x"] = d.x;
    j["r"] = d.r;
    j["count"] = d.count;
    j["comparator"] = d.comparator;
    j["ratio"] = d.ratio;
    return j.dump(2);
}

}  // namespace wsieve::search
