#include "chankit/info_core.hpp"

#include <cmath>
#include <sstream>

namespace chankit {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void validate_probs(const std::vector<double>& probs, const char* what) {
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw validation_error(std::string(what) + ": entry at index " + std::to_string(i) +
                                   " is " + fmt(p) + "; probabilities must lie in [0, 1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw validation_error(std::string(what) + ": probabilities sum to " + fmt(sum) +
                               "; mass must sum to 1 within " + fmt(kSumTolerance));
    }
}

// Tiny negative values produced by rounding in sums that are nonnegative by
// construction are snapped to zero; anything larger is a genuine bug.
double snap_nonnegative(double v) {
    return (v < 0.0 && v > -kSumTolerance) ? 0.0 : v;
}

}  // namespace

Distribution::Distribution(std::vector<double> probs, std::uint64_t size)
    : probs_(std::move(probs)), size_(size) {
    validate_probs(probs_, "distribution");
    if (size_ == 0) {
        throw validation_error("distribution: size t must be a positive integer");
    }
    const std::uint64_t nz = support();
    if (size_ < nz) {
        throw validation_error("distribution: size t=" + std::to_string(size_) +
                               " is smaller than the support (" + std::to_string(nz) +
                               " nonzero entries)");
    }
}

Distribution::Distribution(std::vector<double> probs)
    : probs_(std::move(probs)), size_(probs_.size()) {
    validate_probs(probs_, "distribution");
    if (size_ == 0) {
        throw validation_error("distribution: size t must be a positive integer");
    }
}

Distribution Distribution::uniform(std::uint64_t n) {
    if (n == 0) {
        throw domain_error("uniform distribution requires n >= 1");
    }
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)), n);
}

std::uint64_t Distribution::support() const noexcept {
    std::uint64_t nz = 0;
    for (double p : probs_) {
        if (p > 0.0) ++nz;
    }
    return nz;
}

JointDistribution::JointDistribution(std::vector<double> table, std::size_t rows, std::size_t cols)
    : table_(std::move(table)), rows_(rows), cols_(cols) {
    if (rows_ == 0 || cols_ == 0) {
        throw validation_error("joint distribution: table must have at least one row and column");
    }
    if (table_.size() != rows_ * cols_) {
        throw validation_error("joint distribution: table has " + std::to_string(table_.size()) +
                               " entries, expected " + std::to_string(rows_ * cols_));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const double p = table_[i];
        if (!(p >= 0.0)) {
            throw validation_error("joint distribution: entry at (" + std::to_string(i / cols_) +
                                   ", " + std::to_string(i % cols_) + ") is " + fmt(p) +
                                   "; entries must be >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw validation_error("joint distribution: entries sum to " + fmt(sum) +
                               "; mass must sum to 1 within " + fmt(kSumTolerance));
    }
}

JointDistribution::JointDistribution(const std::vector<std::vector<double>>& rows)
    : JointDistribution(
          [&rows] {
              std::vector<double> flat;
              const std::size_t cols = rows.empty() ? 0 : rows.front().size();
              for (const auto& row : rows) {
                  if (row.size() != cols) {
                      throw validation_error("joint distribution: ragged rows");
                  }
                  flat.insert(flat.end(), row.begin(), row.end());
              }
              return flat;
          }(),
          rows.size(), rows.empty() ? 0 : rows.front().size()) {}

Distribution JointDistribution::row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m[r] += at(r, c);
        }
    }
    return Distribution(std::move(m), rows_);
}

Distribution JointDistribution::col_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m[c] += at(r, c);
        }
    }
    return Distribution(std::move(m), cols_);
}

double entropy(const Distribution& d) {
    double h = 0.0;
    for (double p : d.probs()) {
        if (p > 0.0) h -= p * std::log2(p);  // 0 log 0 = 0: zero entries skipped
    }
    return h;
}

double entropy_bound(std::uint64_t n) {
    if (n == 0) {
        throw domain_error("entropy bound is undefined for an empty alphabet (n = 0)");
    }
    return std::log2(static_cast<double>(n));
}

double conditional_entropy(const JointDistribution& j) {
    double h = 0.0;
    for (std::size_t r = 0; r < j.rows(); ++r) {
        double pa = 0.0;
        for (std::size_t c = 0; c < j.cols(); ++c) pa += j.at(r, c);
        if (pa <= 0.0) continue;
        double hrow = 0.0;
        for (std::size_t c = 0; c < j.cols(); ++c) {
            const double cond = j.at(r, c) / pa;
            if (cond > 0.0) hrow -= cond * std::log2(cond);
        }
        h += pa * hrow;
    }
    return h;
}

double mutual_information(const JointDistribution& j) {
    const auto pa = j.row_marginal().probs();
    const auto pb = j.col_marginal().probs();
    double mi = 0.0;
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t c = 0; c < j.cols(); ++c) {
            const double p = j.at(r, c);
            if (p > 0.0) mi += p * std::log2(p / (pa[r] * pb[c]));
        }
    }
    return snap_nonnegative(mi);
}

double kl_divergence(const Distribution& p, const Distribution& q) {
    if (p.probs().size() != q.probs().size()) {
        throw validation_error("kl divergence: distributions have different lengths (" +
                               std::to_string(p.probs().size()) + " vs " +
                               std::to_string(q.probs().size()) + ")");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.probs().size(); ++i) {
        const double pi = p.probs()[i];
        const double qi = q.probs()[i];
        if (pi > 0.0) {
            if (qi == 0.0) {
                throw domain_error("kl divergence: support violation at index " +
                                   std::to_string(i) + " (q is zero where p is " + fmt(pi) + ")");
            }
            d += pi * std::log2(pi / qi);
        }
    }
    return snap_nonnegative(d);
}

RelativeInformation relative_information(const Distribution& d) {
    const double bound = entropy_bound(d.size());
    double slack = bound - entropy(d);
    if (slack < 0.0 && slack > -kSumTolerance) slack = 0.0;
    // Recover the entropy from the bound and the conditional term rather than
    // returning the directly summed value.
    const double ent = bound - slack;
    return RelativeInformation{ent, bound, slack};
}

double mutual_bound(std::uint64_t n, double joint_entropy_bits) {
    const double lo = entropy_bound(n);
    const double hi = 2.0 * lo;
    if (!(joint_entropy_bits >= lo - kSumTolerance && joint_entropy_bits <= hi + kSumTolerance)) {
        throw domain_error("mutual bound: joint entropy " + fmt(joint_entropy_bits) +
                           " lies outside [log2 n, 2 log2 n] = [" + fmt(lo) + ", " + fmt(hi) +
                           "]; not a realizable joint with uniform marginals");
    }
    double mb = hi - joint_entropy_bits;
    if (mb < 0.0) mb = 0.0;
    if (mb > lo) mb = lo;
    return mb;
}

}  // namespace chankit
