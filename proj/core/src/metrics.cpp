#include "mvsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "mvsc/format.hpp"

namespace mvsc {

namespace {

std::vector<int> compact(std::span<const int> labels, int& count) {
    std::map<int, int> ids;
    for (int l : labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& [label, id] : ids) id = next++;
    count = next;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(ids.at(l));
    return out;
}

void require_same_length(std::span<const int> pred, std::span<const int> truth) {
    if (pred.size() != truth.size())
        throw LengthMismatch("label vectors differ in length: " + std::to_string(pred.size()) + " vs " +
                             std::to_string(truth.size()));
}

double pairs(long long n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

std::vector<long long> row_sums(const Contingency& c) {
    std::vector<long long> out(static_cast<std::size_t>(c.pred_clusters), 0);
    for (int p = 0; p < c.pred_clusters; ++p)
        for (int t = 0; t < c.true_classes; ++t) out[static_cast<std::size_t>(p)] += c.at(p, t);
    return out;
}

std::vector<long long> col_sums(const Contingency& c) {
    std::vector<long long> out(static_cast<std::size_t>(c.true_classes), 0);
    for (int p = 0; p < c.pred_clusters; ++p)
        for (int t = 0; t < c.true_classes; ++t) out[static_cast<std::size_t>(t)] += c.at(p, t);
    return out;
}

// col_of_row for the best pred -> class matching, padded to a square problem.
// With break_ties, matchings of equal overlap are ranked by summed per-pair
// Dice score, so the choice no longer depends on the order of the ids. The
// secondary term totals less than 1 and cannot outweigh one sample of overlap.
std::vector<int> best_matching(const Contingency& c, bool break_ties = false) {
    const int k = std::max(c.pred_clusters, c.true_classes);
    std::vector<std::vector<double>> weight(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    const std::vector<long long> a = row_sums(c);
    const std::vector<long long> b = col_sums(c);
    const double eps = 1.0 / (k + 1);
    for (int p = 0; p < c.pred_clusters; ++p)
        for (int t = 0; t < c.true_classes; ++t) {
            const auto hit = static_cast<double>(c.at(p, t));
            double w = hit;
            if (break_ties)
                w += eps * 2.0 * hit / static_cast<double>(a[static_cast<std::size_t>(p)] + b[static_cast<std::size_t>(t)]);
            weight[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] = w;
        }
    return max_weight_assignment(weight);
}

double harmonic(double a, double b) { return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

} // namespace

Contingency contingency(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    Contingency c;
    const std::vector<int> p = compact(pred, c.pred_clusters);
    const std::vector<int> t = compact(truth, c.true_classes);
    c.counts.assign(static_cast<std::size_t>(c.pred_clusters) * static_cast<std::size_t>(c.true_classes), 0);
    for (std::size_t i = 0; i < p.size(); ++i)
        ++c.counts[static_cast<std::size_t>(p[i]) * static_cast<std::size_t>(c.true_classes) + static_cast<std::size_t>(t[i])];
    return c;
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
    // Shortest augmenting path Hungarian method on cost = -weight. Index 0 of
    // the potentials and matching arrays is a sentinel column.
    const std::size_t n = weight.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> col_of_row(n, -1);
    for (std::size_t j = 1; j <= n; ++j)
        if (row_of_col[j] > 0) col_of_row[row_of_col[j] - 1] = static_cast<int>(j - 1);
    return col_of_row;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    if (pred.empty()) throw LengthMismatch("accuracy needs at least one sample");
    const Contingency c = contingency(pred, truth);
    const std::vector<int> match = best_matching(c);
    long long hit = 0;
    for (int p = 0; p < c.pred_clusters; ++p) {
        const int t = match[static_cast<std::size_t>(p)];
        if (t < c.true_classes) hit += c.at(p, t);
    }
    return static_cast<double>(hit) / static_cast<double>(pred.size());
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    if (pred.empty()) return 0.0;
    const Contingency c = contingency(pred, truth);
    const double n = static_cast<double>(pred.size());
    const std::vector<long long> a = row_sums(c);
    const std::vector<long long> b = col_sums(c);

    auto entropy = [n](const std::vector<long long>& sizes) {
        double h = 0.0;
        for (long long s : sizes)
            if (s > 0) h -= (static_cast<double>(s) / n) * std::log(static_cast<double>(s) / n);
        return h;
    };
    double mutual = 0.0;
    for (int p = 0; p < c.pred_clusters; ++p)
        for (int t = 0; t < c.true_classes; ++t) {
            const auto nij = static_cast<double>(c.at(p, t));
            if (nij > 0)
                mutual += (nij / n) * std::log(n * nij / (static_cast<double>(a[static_cast<std::size_t>(p)]) *
                                                          static_cast<double>(b[static_cast<std::size_t>(t)])));
        }
    const double ha = entropy(a);
    const double hb = entropy(b);
    // Two single-cluster partitions agree completely; one alone carries no information.
    if (ha <= 0.0 && hb <= 0.0) return 1.0;
    const double denom = std::sqrt(ha * hb);
    if (denom <= 0.0) return 0.0;
    return std::clamp(mutual / denom, 0.0, 1.0);
}

double ari(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    if (pred.size() < 2) throw LengthMismatch("ari needs at least two samples");
    const Contingency c = contingency(pred, truth);
    double index = 0.0;
    for (long long x : c.counts) index += pairs(x);
    double sum_a = 0.0, sum_b = 0.0;
    for (long long x : row_sums(c)) sum_a += pairs(x);
    for (long long x : col_sums(c)) sum_b += pairs(x);
    const double expected = sum_a * sum_b / pairs(static_cast<long long>(pred.size()));
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

PrecisionRecall pairwise_prf(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    if (pred.size() < 2) throw LengthMismatch("pairwise scores need at least two samples");
    const Contingency c = contingency(pred, truth);
    double together = 0.0, pred_pairs = 0.0, true_pairs = 0.0;
    for (long long x : c.counts) together += pairs(x);
    for (long long x : row_sums(c)) pred_pairs += pairs(x);
    for (long long x : col_sums(c)) true_pairs += pairs(x);

    PrecisionRecall out;
    out.vacuous = pred_pairs == 0.0 || true_pairs == 0.0;
    out.precision = pred_pairs > 0.0 ? together / pred_pairs : 1.0;
    out.recall = true_pairs > 0.0 ? together / true_pairs : 1.0;
    out.f_score = harmonic(out.precision, out.recall);
    return out;
}

PrecisionRecall mapped_prf(std::span<const int> pred, std::span<const int> truth) {
    require_same_length(pred, truth);
    PrecisionRecall out;
    if (pred.empty()) return out;
    const Contingency c = contingency(pred, truth);
    const std::vector<int> match = best_matching(c, true);
    const std::vector<long long> a = row_sums(c);
    const std::vector<long long> b = col_sums(c);

    std::vector<int> cluster_of_class(static_cast<std::size_t>(c.true_classes), -1);
    for (int p = 0; p < c.pred_clusters; ++p) {
        const int t = match[static_cast<std::size_t>(p)];
        if (t < c.true_classes) cluster_of_class[static_cast<std::size_t>(t)] = p;
    }
    double precision = 0.0, recall = 0.0;
    for (int t = 0; t < c.true_classes; ++t) {
        const int p = cluster_of_class[static_cast<std::size_t>(t)];
        if (p < 0) {
            out.vacuous = true;
            continue;
        }
        const auto hit = static_cast<double>(c.at(p, t));
        precision += hit / static_cast<double>(a[static_cast<std::size_t>(p)]);
        recall += hit / static_cast<double>(b[static_cast<std::size_t>(t)]);
    }
    out.precision = precision / c.true_classes;
    out.recall = recall / c.true_classes;
    out.f_score = harmonic(out.precision, out.recall);
    return out;
}

const std::vector<std::string>& MetricReport::csv_header() {
    static const std::vector<std::string> header{"acc",          "nmi",           "ari",
                                                 "pairwise_precision", "pairwise_recall", "pairwise_f",
                                                 "mapped_precision",   "mapped_recall",   "mapped_f"};
    return header;
}

std::vector<double> MetricReport::csv_values() const {
    return {acc, nmi, ari, pairwise.precision, pairwise.recall, pairwise.f_score,
            mapped.precision, mapped.recall, mapped.f_score};
}

void MetricReport::write_text(std::ostream& out) const {
    auto line = [&out](const char* key, double value, const char* note = "") {
        out << key << " = " << format_number(value, 10) << note << '\n';
    };
    line("acc", acc);
    line("nmi", nmi);
    line("ari", ari);
    line("pairwise.precision", pairwise.precision);
    line("pairwise.recall", pairwise.recall);
    line("pairwise.f_score", pairwise.f_score, pairwise.vacuous ? "  (empty pair set, convention applied)" : "");
    line("mapped.precision", mapped.precision);
    line("mapped.recall", mapped.recall);
    line("mapped.f_score", mapped.f_score, mapped.vacuous ? "  (class never predicted, counted as 0)" : "");
}

MetricReport evaluate(std::span<const int> pred, std::span<const int> truth) {
    MetricReport r;
    r.acc = accuracy(pred, truth);
    r.nmi = nmi(pred, truth);
    r.ari = ari(pred, truth);
    r.pairwise = pairwise_prf(pred, truth);
    r.mapped = mapped_prf(pred, truth);
    return r;
}

} // namespace mvsc
