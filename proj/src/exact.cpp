#include "ising/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ising/errors.hpp"
#include "ising/log_sum_exp.hpp"
#include "ising/parallel.hpp"

namespace ising {

unsigned default_thread_count() {
    if (const char* env = std::getenv("ISING_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr int kChunkBits = 16;
constexpr int kRefreshInterval = 256;
constexpr int kMaxWindow = 20;

// Slots expressed in reduced vertex ids.
struct Slots {
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> window;
};

struct LogSums {
    double total = kNegInf;
    std::vector<double> plus, minus, agree, disagree, window;

    explicit LogSums(const Slots& s)
        : plus(s.vertices.size(), kNegInf),
          minus(s.vertices.size(), kNegInf),
          agree(s.pairs.size(), kNegInf),
          disagree(s.pairs.size(), kNegInf),
          window(std::size_t{1} << s.window.size(), kNegInf) {}

    void merge(const LogSums& o) {
        total = log_add(total, o.total);
        auto add = [](std::vector<double>& a, const std::vector<double>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] = log_add(a[i], b[i]);
        };
        add(plus, o.plus);
        add(minus, o.minus);
        add(agree, o.agree);
        add(disagree, o.disagree);
        add(window, o.window);
    }
};

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

class Enumerator {
public:
    Enumerator(const IsingInstance& inst, const Slots& slots) : slots_(slots), n_(inst.vertex_count()) {
        field_.resize(n_);
        for (int v = 0; v < n_; ++v) field_[v] = inst.field(v).value();
        offsets_.assign(n_ + 1, 0);
        for (int v = 0; v < n_; ++v) {
            for (const Neighbor& nb : inst.graph().neighbors(v)) {
                nbr_.push_back(nb.vertex);
                weight_.push_back(inst.beta() * nb.coupling);
            }
            offsets_[v + 1] = static_cast<int>(nbr_.size());
        }
    }

    std::uint64_t config_count() const { return std::uint64_t{1} << n_; }
    std::uint64_t chunk_size() const { return std::min<std::uint64_t>(config_count(), std::uint64_t{1} << kChunkBits); }

    LogSums run_chunk(std::uint64_t chunk) const {
        const std::uint64_t size = chunk_size();
        const std::uint64_t k0 = chunk * size;
        thread_local std::vector<double> energy;
        thread_local std::vector<int> spin;
        thread_local std::vector<double> local;
        energy.resize(size);
        spin.resize(n_);
        local.resize(n_);

        auto refresh = [&](std::uint64_t k) {
            const std::uint64_t cfg = k ^ (k >> 1);
            for (int v = 0; v < n_; ++v) spin[v] = ((cfg >> v) & 1u) ? 1 : -1;
            double e = 0.0;
            for (int v = 0; v < n_; ++v) {
                double coupling_sum = 0.0;
                for (int p = offsets_[v]; p < offsets_[v + 1]; ++p) coupling_sum += weight_[p] * spin[nbr_[p]];
                local[v] = field_[v] + coupling_sum;
                e += spin[v] * (field_[v] + 0.5 * coupling_sum);
            }
            return e;
        };

        double e = refresh(k0);
        for (std::uint64_t t = 0; t < size; ++t) {
            energy[t] = e;
            if (t + 1 == size) break;
            const std::uint64_t k = k0 + t + 1;
            if ((t + 1) % kRefreshInterval == 0) {
                e = refresh(k);
                continue;
            }
            const int i = std::countr_zero(k);
            e -= 2.0 * spin[i] * local[i];
            spin[i] = -spin[i];
            const double delta = 2.0 * spin[i];
            for (int p = offsets_[i]; p < offsets_[i + 1]; ++p) local[nbr_[p]] += delta * weight_[p];
        }

        const double hi = *std::max_element(energy.begin(), energy.begin() + static_cast<std::ptrdiff_t>(size));
        const std::size_t nv = slots_.vertices.size();
        const std::size_t np = slots_.pairs.size();
        thread_local std::vector<double> acc;
        const std::size_t nw = std::size_t{1} << slots_.window.size();
        acc.assign(1 + 2 * nv + 2 * np + nw, 0.0);
        double* total = acc.data();
        double* plus = total + 1;
        double* minus = plus + nv;
        double* agree = minus + nv;
        double* disagree = agree + np;
        double* window = disagree + np;
        for (std::uint64_t t = 0; t < size; ++t) {
            const double w = std::exp(energy[t] - hi);
            const std::uint64_t k = k0 + t;
            const std::uint64_t cfg = k ^ (k >> 1);
            *total += w;
            for (std::size_t q = 0; q < nv; ++q) ((cfg >> slots_.vertices[q]) & 1u ? plus[q] : minus[q]) += w;
            for (std::size_t q = 0; q < np; ++q) {
                const auto [a, b] = slots_.pairs[q];
                ((((cfg >> a) ^ (cfg >> b)) & 1u) ? disagree[q] : agree[q]) += w;
            }
            if (!slots_.window.empty()) {
                std::size_t idx = 0;
                for (std::size_t q = 0; q < slots_.window.size(); ++q) idx |= ((cfg >> slots_.window[q]) & 1u) << q;
                window[idx] += w;
            }
        }

        LogSums out(slots_);
        out.total = hi + safe_log(*total);
        for (std::size_t q = 0; q < nv; ++q) {
            out.plus[q] = hi + safe_log(plus[q]);
            out.minus[q] = hi + safe_log(minus[q]);
        }
        for (std::size_t q = 0; q < np; ++q) {
            out.agree[q] = hi + safe_log(agree[q]);
            out.disagree[q] = hi + safe_log(disagree[q]);
        }
        for (std::size_t q = 0; q < nw; ++q) out.window[q] = hi + safe_log(window[q]);
        return out;
    }

private:
    const Slots& slots_;
    int n_;
    std::vector<double> field_;
    std::vector<int> offsets_;
    std::vector<int> nbr_;
    std::vector<double> weight_;
};

LogSums enumerate(const IsingInstance& inst, const Slots& slots, unsigned threads) {
    Enumerator en(inst, slots);
    const std::uint64_t chunks = en.config_count() / en.chunk_size();
    if (chunks == 1) return en.run_chunk(0);
    std::vector<LogSums> partial(chunks, LogSums(slots));
    parallel_for(chunks, threads, [&](std::size_t c) { partial[c] = en.run_chunk(c); });
    LogSums out(slots);
    for (const LogSums& p : partial) out.merge(p);
    return out;
}

void check_vertex(const IsingInstance& inst, int v) {
    if (v < 0 || v >= inst.vertex_count()) throw ValidationError("vertex " + std::to_string(v) + " out of range");
}

}  // namespace

double ExactStats::window_probability(std::size_t pattern) const {
    const double lw = log_window.at(pattern);
    return lw == kNegInf ? 0.0 : std::exp(lw - log_z);
}

ExactStats exact_stats(const IsingInstance& instance, const ExactQuery& query, const EngineOptions& options) {
    for (int v : query.vertices) check_vertex(instance, v);
    for (auto [u, v] : query.pairs) {
        check_vertex(instance, u);
        check_vertex(instance, v);
    }
    for (int v : query.window) check_vertex(instance, v);
    if (static_cast<int>(query.window.size()) > kMaxWindow)
        throw CapacityError("window of " + std::to_string(query.window.size()) + " spins is too large to tabulate");

    const bool finite = instance.all_finite();
    ReducedInstance reduced;
    if (!finite) reduced = reduce_infinite_fields(instance);
    const IsingInstance& work = finite ? instance : reduced.instance;
    auto to_reduced = [&](int v) { return finite ? v : reduced.vertex_map[v]; };
    auto fixed = [&](int v) { return finite ? 0 : (reduced.vertex_map[v] >= 0 ? 0 : reduced.fixed_spins.at(v)); };

    if (work.vertex_count() > options.max_vertices)
        throw CapacityError("exact enumeration needs " + std::to_string(work.vertex_count()) +
                            " free spins, above the cap of " + std::to_string(options.max_vertices) +
                            "; use a Monte Carlo method");

    Slots slots;
    for (int v : query.vertices)
        if (fixed(v) == 0) slots.vertices.push_back(to_reduced(v));
    for (auto [u, v] : query.pairs)
        if (fixed(u) == 0 && fixed(v) == 0) slots.pairs.emplace_back(to_reduced(u), to_reduced(v));
    for (int v : query.window)
        if (fixed(v) == 0) slots.window.push_back(to_reduced(v));

    const LogSums sums = enumerate(work, slots, options.threads);

    ExactStats out;
    out.log_z = sums.total;
    std::size_t sv = 0;
    std::vector<double> lp_all, lm_all;
    for (int v : query.vertices) {
        const int s = fixed(v);
        double lp, lm;
        if (s == 0) {
            lp = sums.plus[sv];
            lm = sums.minus[sv];
            ++sv;
        } else {
            lp = s > 0 ? sums.total : kNegInf;
            lm = s > 0 ? kNegInf : sums.total;
        }
        out.log_plus.push_back(lp);
        out.log_minus.push_back(lm);
        out.magnetizations.push_back(spin_mean_from_logs(lp, lm));
        out.marginals.push_back(lp == kNegInf ? 0.0 : std::exp(lp - sums.total));
    }

    // Pairs with a clamped end need the free end's magnetization.
    std::size_t sp = 0;
    for (auto [u, v] : query.pairs) {
        const int su = fixed(u), sv2 = fixed(v);
        if (su == 0 && sv2 == 0) {
            out.pair_products.push_back(spin_mean_from_logs(sums.agree[sp], sums.disagree[sp]));
            ++sp;
        } else if (su != 0 && sv2 != 0) {
            out.pair_products.push_back(static_cast<double>(su * sv2));
        } else {
            const int free_v = su == 0 ? u : v;
            const int s = su == 0 ? sv2 : su;
            ExactQuery sub;
            sub.vertices = {free_v};
            const ExactStats m = exact_stats(instance, sub, options);
            out.pair_products.push_back(s * m.magnetizations[0]);
        }
    }

    if (!query.window.empty()) {
        const std::size_t nw = std::size_t{1} << query.window.size();
        out.log_window.assign(nw, kNegInf);
        for (std::size_t pattern = 0; pattern < nw; ++pattern) {
            std::size_t reduced_idx = 0;
            std::size_t bit = 0;
            bool consistent = true;
            for (std::size_t q = 0; q < query.window.size(); ++q) {
                const int want = ((pattern >> q) & 1u) ? 1 : -1;
                const int s = fixed(query.window[q]);
                if (s == 0) {
                    if (want > 0) reduced_idx |= std::size_t{1} << bit;
                    ++bit;
                } else if (s != want) {
                    consistent = false;
                }
            }
            if (consistent) out.log_window[pattern] = sums.window[reduced_idx];
        }
    }
    return out;
}

std::vector<double> magnetizations(const IsingInstance& instance, const EngineOptions& options) {
    ExactQuery q;
    for (int v = 0; v < instance.vertex_count(); ++v) q.vertices.push_back(v);
    return exact_stats(instance, q, options).magnetizations;
}

double conditional_expectation_clamped(const IsingInstance& instance, int o, int v, int s,
                                       const EngineOptions& options) {
    check_vertex(instance, o);
    check_vertex(instance, v);
    if (s != 1 && s != -1) throw DomainError("conditioning value must be +1 or -1");
    const ExtendedField fv = instance.field(v);
    if (fv.infinite_sign() == -s)
        throw ImpossibleEventError("spin " + std::to_string(v) + " is clamped to " + std::to_string(-s));
    const IsingInstance clamped =
        instance.with_field(v, s > 0 ? ExtendedField::plus_infinity() : ExtendedField::minus_infinity());
    ExactQuery q;
    q.vertices = {o};
    return exact_stats(clamped, q, options).magnetizations[0];
}

double conditional_expectation(const IsingInstance& instance, int o, int v, int s, const EngineOptions& options) {
    check_vertex(instance, o);
    check_vertex(instance, v);
    if (s != 1 && s != -1) throw DomainError("conditioning value must be +1 or -1");
    const ExtendedField fv = instance.field(v);
    if (fv.infinite_sign() == -s)
        throw ImpossibleEventError("spin " + std::to_string(v) + " is clamped to " + std::to_string(-s));
    if (o == v) return s;
    if (fv.is_infinite()) return conditional_expectation_clamped(instance, o, v, s, options);

    ExactQuery q;
    q.window = {o, v};
    const ExactStats st = exact_stats(instance, q, options);
    const std::size_t vbit = s > 0 ? 2 : 0;
    const double l_plus = st.log_window[vbit | 1];
    const double l_minus = st.log_window[vbit];
    // Below this relative weight the restricted sums lose all significant digits.
    constexpr double kNegligibleLogWeight = -600.0;
    if (log_add(l_plus, l_minus) - st.log_z < kNegligibleLogWeight)
        return conditional_expectation_clamped(instance, o, v, s, options);
    return spin_mean_from_logs(l_plus, l_minus);
}

double covariance(const IsingInstance& instance, int u, int v, const EngineOptions& options) {
    if (u == v) throw DomainError("covariance needs two distinct vertices (u == v is a variance)");
    ExactQuery q;
    q.vertices = {u, v};
    q.pairs = {{u, v}};
    const ExactStats st = exact_stats(instance, q, options);
    return st.pair_products[0] - st.magnetizations[0] * st.magnetizations[1];
}

EffectiveFieldResult effective_field(const IsingInstance& instance, int o, const EngineOptions& options) {
    check_vertex(instance, o);
    if (instance.field(o).is_infinite())
        throw DomainError("effective field at vertex " + std::to_string(o) + " needs a finite own field");
    ExactQuery q;
    q.vertices = {o};
    const ExactStats st = exact_stats(instance.with_field(o, 0.0), q, options);
    return {0.5 * (st.log_plus[0] - st.log_minus[0])};
}

namespace {

void require_nonnegative(const IsingInstance& instance_h) {
    for (int w = 0; w < instance_h.vertex_count(); ++w)
        if (instance_h.field(w).value() < 0.0)
            throw DomainError("mixture coefficient needs h >= 0; vertex " + std::to_string(w) + " has " +
                              instance_h.field(w).to_string());
}

}  // namespace

MixtureAlpha mixture_alpha(const IsingInstance& instance_h, int v, const EngineOptions& options) {
    check_vertex(instance_h, v);
    require_nonnegative(instance_h);
    const ExtendedField hv = instance_h.field(v);
    if (hv.value() == 0.0) return {1.0, true};
    if (hv.is_infinite()) return {0.0, false};
    const double z = effective_field(instance_h, v, options).lambda;
    const double th = std::tanh(hv.value());
    return {one_minus_tanh(hv.value()) / (1.0 + std::tanh(z) * th), false};
}

double mixture_alpha_from_magnetizations(const IsingInstance& instance_h, int v, const EngineOptions& options) {
    check_vertex(instance_h, v);
    require_nonnegative(instance_h);
    ExactQuery q;
    q.vertices = {v};
    const ExactStats with_h = exact_stats(instance_h, q, options);
    const ExactStats reset = exact_stats(instance_h.with_field(v, 0.0), q, options);
    // 1 - <s_v> = 2 mu(s_v = -1), kept in log form.
    return std::exp((with_h.log_minus[0] - with_h.log_z) - (reset.log_minus[0] - reset.log_z));
}

}  // namespace ising
