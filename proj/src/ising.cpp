#include "qa/ising.hpp"

#include "qa/error.hpp"
#include "qa/kernels.hpp"
#include "qa/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace qa {
namespace {

void check_qubits(int n_qubits, int max_qubits) {
    if (n_qubits < 1) {
        throw UsageError("n_qubits must be >= 1, got " + std::to_string(n_qubits));
    }
    if (n_qubits > max_qubits) {
        throw UsageError("n_qubits=" + std::to_string(n_qubits) + " exceeds the memory cap of " +
                         std::to_string(max_qubits) + " qubits");
    }
}

void check_terms(int n_qubits, std::span<const IsingTerm> terms) {
    const std::uint64_t valid = (n_qubits >= 64) ? ~0ULL : ((1ULL << n_qubits) - 1);
    for (const auto& t : terms) {
        if (t.mask == 0) {
            throw UsageError("Ising term with empty site set");
        }
        if ((t.mask & ~valid) != 0) {
            throw UsageError("Ising term site index out of range for n_qubits=" +
                             std::to_string(n_qubits));
        }
    }
}

double sample_stddev(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return x.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

// Half-maximum width of a Freedman-Diaconis histogram, with linear
// interpolation of the outermost half-maximum crossings.
double fwhm_histogram(std::span<const double> diagonal) {
    std::vector<double> s(diagonal.begin(), diagonal.end());
    std::sort(s.begin(), s.end());
    const double lo = s.front();
    const double hi = s.back();
    if (hi <= lo) {
        return 0.0;
    }
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(s.size()));
    if (!(width > 0.0)) {
        width = (hi - lo) / std::max<double>(1.0, std::sqrt(static_cast<double>(s.size())));
    }
    const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / width)));
    std::vector<double> counts(bins, 0.0);
    for (double v : s) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(b, bins - 1)] += 1.0;
    }
    const auto peak = static_cast<std::size_t>(
        std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));
    const double half = 0.5 * counts[peak];
    auto center = [&](double b) { return lo + (b + 0.5) * width; };

    std::size_t left = 0;
    while (counts[left] < half) {
        ++left;
    }
    double x_left = center(static_cast<double>(left));
    if (left > 0) {
        const double c0 = counts[left - 1];
        const double c1 = counts[left];
        x_left = center(static_cast<double>(left - 1) + (half - c0) / (c1 - c0));
    }
    std::size_t right = bins - 1;
    while (counts[right] < half) {
        --right;
    }
    double x_right = center(static_cast<double>(right));
    if (right + 1 < bins) {
        const double c0 = counts[right];
        const double c1 = counts[right + 1];
        x_right = center(static_cast<double>(right) + (c0 - half) / (c0 - c1));
    }
    return std::max(x_right - x_left, width);
}

}  // namespace

IsingTerm IsingTerm::from_sites(std::span<const int> sites, double coeff) {
    if (sites.empty()) {
        throw UsageError("Ising term with empty site set");
    }
    std::uint64_t mask = 0;
    for (int s : sites) {
        if (s < 0 || s >= 64) {
            throw UsageError("Ising term site index out of range: " + std::to_string(s));
        }
        const std::uint64_t bit = 1ULL << s;
        if (mask & bit) {
            throw UsageError("Ising term repeats site " + std::to_string(s));
        }
        mask |= bit;
    }
    return {mask, coeff};
}

std::vector<int> IsingTerm::sites() const {
    std::vector<int> out;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        out.push_back(std::countr_zero(m));
    }
    return out;
}

int IsingTerm::order() const { return std::popcount(mask); }

BandwidthMode parse_bandwidth_mode(std::string_view name) {
    if (name == "fwhm-gaussian") return BandwidthMode::FwhmGaussian;
    if (name == "fwhm-histogram") return BandwidthMode::FwhmHistogram;
    if (name == "full-range") return BandwidthMode::FullRange;
    throw UsageError("unknown bandwidth mode: " + std::string(name));
}

std::string_view to_string(BandwidthMode mode) {
    switch (mode) {
        case BandwidthMode::FwhmGaussian: return "fwhm-gaussian";
        case BandwidthMode::FwhmHistogram: return "fwhm-histogram";
        case BandwidthMode::FullRange: return "full-range";
    }
    return "?";
}

SpectrumStats spectrum_stats(std::span<const double> diagonal, BandwidthMode mode,
                             double degeneracy_tol) {
    const std::size_t n = diagonal.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw UsageError("diagonal length must be a power of two");
    }
    SpectrumStats st;
    st.bandwidth_mode = mode;
    st.sort_order.resize(n);
    std::iota(st.sort_order.begin(), st.sort_order.end(), 0U);
    std::stable_sort(st.sort_order.begin(), st.sort_order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return diagonal[a] < diagonal[b]; });
    st.ground_energy = diagonal[st.sort_order.front()];
    st.max_energy = diagonal[st.sort_order.back()];

    if (st.max_energy > st.ground_energy) {
        switch (mode) {
            case BandwidthMode::FwhmGaussian:
                st.bandwidth = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sample_stddev(diagonal);
                break;
            case BandwidthMode::FwhmHistogram:
                st.bandwidth = fwhm_histogram(diagonal);
                break;
            case BandwidthMode::FullRange:
                st.bandwidth = st.max_energy - st.ground_energy;
                break;
        }
    }
    st.zero_bandwidth = !(st.bandwidth > 0.0);
    if (st.zero_bandwidth) {
        st.bandwidth = 0.0;
    }
    st.mean_level_spacing = st.bandwidth / static_cast<double>(n);

    st.degeneracy_tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-12 * st.bandwidth;
    st.ground_degeneracy = 0;
    for (std::uint32_t idx : st.sort_order) {
        if (diagonal[idx] - st.ground_energy > st.degeneracy_tol) {
            break;
        }
        ++st.ground_degeneracy;
    }
    return st;
}

std::vector<double> walsh_diagonal(int n_qubits, std::span<const IsingTerm> terms, int max_qubits) {
    check_qubits(n_qubits, max_qubits);
    check_terms(n_qubits, terms);
    std::vector<double> diag(std::size_t{1} << n_qubits, 0.0);
    for (const auto& t : terms) {
        diag[t.mask] += t.coeff;
    }
    kernels::active().fwht(diag.data(), diag.size());
    return diag;
}

std::vector<double> direct_diagonal(int n_qubits, std::span<const IsingTerm> terms) {
    check_qubits(n_qubits, 62);
    check_terms(n_qubits, terms);
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<double> diag(dim, 0.0);
    for (std::size_t z = 0; z < dim; ++z) {
        double e = 0.0;
        for (const auto& t : terms) {
            const bool odd = std::popcount(t.mask & z) & 1;
            e += odd ? -t.coeff : t.coeff;
        }
        diag[z] = e;
    }
    return diag;
}

IsingInstance build_instance(int n_qubits, std::vector<IsingTerm> terms, const BuildOptions& opts) {
    check_qubits(n_qubits, opts.max_qubits);
    check_terms(n_qubits, terms);
    std::map<std::uint64_t, double> merged;
    for (const auto& t : terms) {
        merged[t.mask] += t.coeff;
    }
    IsingInstance inst;
    inst.n_qubits_ = n_qubits;
    inst.terms_.reserve(merged.size());
    for (const auto& [mask, coeff] : merged) {
        inst.terms_.push_back({mask, coeff});
    }
    inst.diagonal_ = walsh_diagonal(n_qubits, inst.terms_, opts.max_qubits);
    inst.stats_ = spectrum_stats(inst.diagonal_, opts.bandwidth_mode, opts.degeneracy_tol);
    return inst;
}

IsingInstance instance_from_diagonal(int n_qubits, std::vector<double> diagonal,
                                     const BuildOptions& opts) {
    check_qubits(n_qubits, opts.max_qubits);
    if (diagonal.size() != (std::size_t{1} << n_qubits)) {
        throw UsageError("diagonal length " + std::to_string(diagonal.size()) +
                         " does not equal 2^" + std::to_string(n_qubits));
    }
    IsingInstance inst;
    inst.n_qubits_ = n_qubits;
    inst.diagonal_ = std::move(diagonal);
    inst.stats_ = spectrum_stats(inst.diagonal_, opts.bandwidth_mode, opts.degeneracy_tol);
    return inst;
}

InstanceMode parse_instance_mode(std::string_view name) {
    if (name == "full-random-couplings" || name == "full-random") return InstanceMode::FullRandomCouplings;
    if (name == "full-random-diagonal") return InstanceMode::FullRandomDiagonal;
    if (name == "range-k" || name == "range") return InstanceMode::RangeK;
    throw UsageError("unknown instance mode: " + std::string(name));
}

std::string_view to_string(InstanceMode mode) {
    switch (mode) {
        case InstanceMode::FullRandomCouplings: return "full-random-couplings";
        case InstanceMode::FullRandomDiagonal: return "full-random-diagonal";
        case InstanceMode::RangeK: return "range-k";
    }
    return "?";
}

IsingInstance random_instance(InstanceMode mode, int n_qubits, std::optional<int> k,
                              std::uint64_t seed, const BuildOptions& opts) {
    check_qubits(n_qubits, opts.max_qubits);
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t dim = std::size_t{1} << n_qubits;

    if (mode == InstanceMode::FullRandomDiagonal) {
        std::vector<double> diag(dim);
        for (auto& e : diag) {
            e = normal(rng);
        }
        return instance_from_diagonal(n_qubits, std::move(diag), opts);
    }

    int max_order = n_qubits;
    if (mode == InstanceMode::RangeK) {
        if (!k || *k < 1 || *k > n_qubits) {
            throw UsageError("range-k instances need 1 <= k <= n_qubits");
        }
        max_order = *k;
    }
    std::vector<IsingTerm> terms;
    for (std::uint64_t mask = 1; mask < dim; ++mask) {
        if (std::popcount(mask) <= max_order) {
            terms.push_back({mask, normal(rng)});
        }
    }
    return build_instance(n_qubits, std::move(terms), opts);
}

IsingInstance grover_instance(int n_qubits, std::uint64_t target, double eps) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (target >= dim) {
        throw UsageError("Grover target outside the basis");
    }
    std::vector<double> diag(dim, 0.0);
    diag[target] = -eps;
    return instance_from_diagonal(n_qubits, std::move(diag));
}

}  // namespace qa
