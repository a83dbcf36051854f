#pragma once

#include <cstdint>
#include <vector>

#include "chankit/errors.hpp"

namespace chankit {

/// Tolerance for probability-mass sums (distribution and joint-table validation).
inline constexpr double kSumTolerance = 1e-9;
/// Tolerance for iff-style equality checks (e.g. KL(p,q) = 0 iff p = q).
inline constexpr double kExactTolerance = 1e-12;

/// Discrete probability distribution over a finite element set.
///
/// `size` is the total element count t of the set and may exceed the number
/// of listed entries; unlisted elements carry zero probability. Validated on
/// construction: entries in [0,1], mass sums to 1 within kSumTolerance, and
/// t is at least the number of nonzero entries.
class Distribution {
public:
    Distribution(std::vector<double> probs, std::uint64_t size);
    explicit Distribution(std::vector<double> probs);

    static Distribution uniform(std::uint64_t n);

    const std::vector<double>& probs() const noexcept { return probs_; }
    std::uint64_t size() const noexcept { return size_; }  // total element count t
    std::uint64_t support() const noexcept;                // count of nonzero entries

    bool operator==(const Distribution&) const = default;

private:
    std::vector<double> probs_;
    std::uint64_t size_;
};

/// Joint probability table p(a_i, b_j); rows are transmitter elements,
/// columns receiver elements. Entries nonnegative, total mass 1 within
/// kSumTolerance.
class JointDistribution {
public:
    JointDistribution(std::vector<double> table, std::size_t rows, std::size_t cols);
    explicit JointDistribution(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double at(std::size_t r, std::size_t c) const { return table_[r * cols_ + c]; }
    const std::vector<double>& flat() const noexcept { return table_; }

    Distribution row_marginal() const;  // p(a_i)
    Distribution col_marginal() const;  // p(b_j)

    bool operator==(const JointDistribution&) const = default;

private:
    std::vector<double> table_;
    std::size_t rows_;
    std::size_t cols_;
};

/// An entropy distribution reported against its bound.
struct RelativeInformation {
    double entropy_bits = 0.0;
    double bound_bits = 0.0;
    double slack_bits = 0.0;  // bound - entropy
};

/// H(d) = -sum p_i log2 p_i over nonzero entries, in bits.
double entropy(const Distribution& d);

/// log2 n, the limit the entropy of an n-element set approaches.
/// Throws domain_error for n = 0.
double entropy_bound(std::uint64_t n);

/// H(B|A) = sum_a p(a) H(B|A=a), in bits.
double conditional_entropy(const JointDistribution& j);

/// Transmission mutual information:
/// sum p(a,b) log2[p(a,b) / (p(a) p(b))] over nonzero joint entries.
double mutual_information(const JointDistribution& j);

/// sum p_i log2(p_i / q_i), in bits. Requires equal lengths and absolute
/// continuity (q_i = 0 implies p_i = 0); throws domain_error otherwise.
double kl_divergence(const Distribution& p, const Distribution& q);

/// Entropy of d evaluated against its bound log2 t. entropy_bits is computed
/// by subtracting the conditional term back out of the bound, not by calling
/// entropy() and copying the value.
RelativeInformation relative_information(const Distribution& d);

/// MB = 2 log2 n - H(A,B). The joint entropy term must lie in
/// [log2 n, 2 log2 n]; throws domain_error outside that range.
double mutual_bound(std::uint64_t n, double joint_entropy_bits);

}  // namespace chankit
