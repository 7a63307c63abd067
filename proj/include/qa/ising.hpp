#pragma once

// Diagonal k-local Ising Hamiltonians over N qubits.
//
// Basis convention: basis index z, qubit q is bit q of z (little-endian,
// qubit 0 is the least significant bit). Bit value 0 means sigma_z = +1,
// bit value 1 means sigma_z = -1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qa {

inline constexpr int kDefaultMaxQubits = 24;
inline constexpr std::string_view kBasisConvention =
    "little-endian: qubit q is bit q of the basis index; bit 0 -> sigma_z=+1, bit 1 -> sigma_z=-1";

/// One product term coeff * prod_{q in sites} sigma_z^q, with the site set stored as a bit mask.
struct IsingTerm {
    std::uint64_t mask = 0;
    double coeff = 0.0;

    static IsingTerm from_sites(std::span<const int> sites, double coeff);
    std::vector<int> sites() const;
    int order() const;
};

enum class BandwidthMode { FwhmGaussian, FwhmHistogram, FullRange };

BandwidthMode parse_bandwidth_mode(std::string_view name);
std::string_view to_string(BandwidthMode mode);

struct SpectrumStats {
    std::vector<std::uint32_t> sort_order;  ///< basis indices by ascending energy, ties by index
    double ground_energy = 0.0;
    double max_energy = 0.0;
    double bandwidth = 0.0;          ///< Delta E_I
    double mean_level_spacing = 0.0; ///< bandwidth / 2^N
    std::size_t ground_degeneracy = 1;
    double degeneracy_tol = 0.0;
    BandwidthMode bandwidth_mode = BandwidthMode::FwhmGaussian;
    bool zero_bandwidth = false;
};

/// degeneracy_tol < 0 selects the default 1e-12 * bandwidth.
SpectrumStats spectrum_stats(std::span<const double> diagonal,
                             BandwidthMode mode = BandwidthMode::FwhmGaussian,
                             double degeneracy_tol = -1.0);

struct BuildOptions {
    int max_qubits = kDefaultMaxQubits;
    BandwidthMode bandwidth_mode = BandwidthMode::FwhmGaussian;
    double degeneracy_tol = -1.0;
};

class IsingInstance {
public:
    IsingInstance() = default;

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return diagonal_.size(); }
    const std::vector<IsingTerm>& terms() const { return terms_; }
    const std::vector<double>& diagonal() const { return diagonal_; }
    const SpectrumStats& stats() const { return stats_; }

    /// Energy above the ground level of the basis state at excitation index n.
    double excitation_energy(std::size_t n) const {
        return diagonal_[stats_.sort_order[n]] - stats_.ground_energy;
    }

private:
    friend IsingInstance build_instance(int, std::vector<IsingTerm>, const BuildOptions&);
    friend IsingInstance instance_from_diagonal(int, std::vector<double>, const BuildOptions&);

    int n_qubits_ = 0;
    std::vector<IsingTerm> terms_;
    std::vector<double> diagonal_;
    SpectrumStats stats_;
};

/// Terms with identical site sets are merged by adding coefficients; the
/// result is ordered by mask.
IsingInstance build_instance(int n_qubits, std::vector<IsingTerm> terms,
                             const BuildOptions& opts = {});

IsingInstance instance_from_diagonal(int n_qubits, std::vector<double> diagonal,
                                     const BuildOptions& opts = {});

/// Diagonal of sum_terms coeff * prod sigma_z via one fast Walsh-Hadamard transform.
std::vector<double> walsh_diagonal(int n_qubits, std::span<const IsingTerm> terms,
                                   int max_qubits = kDefaultMaxQubits);

/// O(terms * 2^N) evaluation; the reference the Walsh path is checked against.
std::vector<double> direct_diagonal(int n_qubits, std::span<const IsingTerm> terms);

enum class InstanceMode { FullRandomCouplings, FullRandomDiagonal, RangeK };

InstanceMode parse_instance_mode(std::string_view name);
std::string_view to_string(InstanceMode mode);

/// Seeded random instance. Couplings and diagonal entries are iid standard normal.
IsingInstance random_instance(InstanceMode mode, int n_qubits, std::optional<int> k,
                              std::uint64_t seed, const BuildOptions& opts = {});

/// -prod_q (1 + eta_q sigma_z^q) / 2 scaled by eps: energy -eps at `target`, 0 elsewhere.
IsingInstance grover_instance(int n_qubits, std::uint64_t target, double eps = 1.0);

}  // namespace qa
