#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Row-major dense count table: rows index predicted clusters, columns classes.
struct Contingency {
    int pred_clusters = 0;
    int true_classes = 0;
    std::vector<long long> counts;

    [[nodiscard]] long long at(int p, int t) const {
        return counts[static_cast<std::size_t>(p) * static_cast<std::size_t>(true_classes) + static_cast<std::size_t>(t)];
    }
};

// Labels may be any nonnegative ids; they are compacted first.
[[nodiscard]] Contingency contingency(std::span<const int> pred, std::span<const int> truth);

// Maximum-weight assignment of rows to columns of a square weight matrix
// (Kuhn-Munkres). Returns col_of_row.
[[nodiscard]] std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

[[nodiscard]] double accuracy(std::span<const int> pred, std::span<const int> truth);
[[nodiscard]] double nmi(std::span<const int> pred, std::span<const int> truth);
[[nodiscard]] double ari(std::span<const int> pred, std::span<const int> truth);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    bool vacuous = false;  // a denominator was empty and the convention applied
};

// Over sample pairs: TP = together in both partitions.
[[nodiscard]] PrecisionRecall pairwise_prf(std::span<const int> pred, std::span<const int> truth);
// Macro-averaged per-class scores after the Kuhn-Munkres mapping; f_score is
// the harmonic mean of the macro precision and recall.
[[nodiscard]] PrecisionRecall mapped_prf(std::span<const int> pred, std::span<const int> truth);

struct MetricReport {
    double acc = 0.0;
    double nmi = 0.0;
    double ari = 0.0;
    PrecisionRecall pairwise;
    PrecisionRecall mapped;

    // Fields of csv_row, in order.
    static const std::vector<std::string>& csv_header();
    [[nodiscard]] std::vector<double> csv_values() const;
    void write_text(std::ostream& out) const;
};

[[nodiscard]] MetricReport evaluate(std::span<const int> pred, std::span<const int> truth);

} // namespace mvsc
