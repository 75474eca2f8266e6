#include "shapebench/eval.hpp"

#include "shapebench/parallel.hpp"
#include "shapebench/rng.hpp"
#include "shapebench/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shapebench {

EvalRecord make_record(std::string item_id, std::shared_ptr<const BinaryShape> truth,
                       std::shared_ptr<const BinaryShape> noisy, std::string noise_kind) {
    EvalRecord r;
    r.item_id = std::move(item_id);
    r.input_iou = iou(*truth, *noisy);
    r.truth = std::move(truth);
    r.noisy = std::move(noisy);
    r.noise_kind = std::move(noise_kind);
    return r;
}

std::vector<double> default_bin_edges() {
    return {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
}

std::vector<double> parse_bin_spec(std::string_view spec) {
    const auto parts = text::split(spec, ':');
    if (parts.size() != 3) {
        throw std::invalid_argument("bins: expected lo:hi:step, got '" + std::string(spec) + "'");
    }
    const double lo = text::parse_double(parts[0]);
    const double hi = text::parse_double(parts[1]);
    const double step = text::parse_double(parts[2]);
    if (!(step > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("bins: need hi > lo and step > 0");
    }
    const auto count = static_cast<long long>(std::llround((hi - lo) / step));
    if (count < 1 || std::abs(lo + static_cast<double>(count) * step - hi) > 1e-9) {
        throw std::invalid_argument("bins: (hi - lo) must be a whole multiple of step");
    }
    std::vector<double> edges;
    for (long long i = 0; i <= count; ++i) {
        // Snap to 1e-9 so 0.5 + 2 * 0.1 reads as 0.7.
        edges.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    edges.back() = hi;
    return edges;
}

std::vector<EvalBin> bin_by_input_iou(std::vector<EvalRecord> records,
                                      std::span<const double> edges, std::size_t cap,
                                      std::uint64_t seed) {
    if (edges.size() < 2) {
        throw std::invalid_argument("bin_by_input_iou: need at least two edges");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            throw std::invalid_argument("bin_by_input_iou: edges must be strictly increasing");
        }
    }
    const std::size_t nbins = edges.size() - 1;
    std::vector<EvalBin> bins(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
        bins[b].lo = edges[b];
        bins[b].hi = edges[b + 1];
        bins[b].cap = cap;
        bins[b].sample_seed = derive_seed(seed, b);
    }
    for (auto& rec : records) {
        const double v = rec.input_iou;
        if (v < edges.front() || v > edges.back()) {
            continue;
        }
        // First edge strictly greater than v; the closed top edge maps to the last bin.
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        std::size_t b = static_cast<std::size_t>(it - edges.begin());
        b = (b == 0) ? 0 : b - 1;
        b = std::min(b, nbins - 1);
        bins[b].records.push_back(std::move(rec));
    }
    for (auto& bin : bins) {
        if (bin.records.size() <= cap) {
            continue;
        }
        // Partial Fisher-Yates over indices, then restore input order.
        std::vector<std::size_t> idx(bin.records.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng rng(bin.sample_seed);
        for (std::size_t i = 0; i < cap; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_below(idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(cap);
        std::sort(idx.begin(), idx.end());
        std::vector<EvalRecord> kept;
        kept.reserve(cap);
        for (auto i : idx) {
            kept.push_back(std::move(bin.records[i]));
        }
        bin.records = std::move(kept);
    }
    return bins;
}

MethodScores evaluate_method(std::string name, const Predictor& predict,
                             const std::vector<EvalBin>& bins, int jobs) {
    if (bins.empty()) {
        throw std::invalid_argument("evaluate_method: no bins");
    }
    MethodScores out;
    out.name = std::move(name);
    out.bins.resize(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) {
        const auto& records = bins[b].records;
        BinScores& scores = out.bins[b];
        scores.ious.assign(records.size(), 0.0);
        std::vector<char> failed(records.size(), 0);
        parallel_for(records.size(), jobs, [&](std::size_t i) {
            try {
                const BinaryShape pred = predict(records[i]);
                scores.ious[i] = iou(pred, *records[i].truth);
            } catch (const std::exception&) {
                scores.ious[i] = 0.0;
                failed[i] = 1;
            }
        });
        scores.failed.assign(failed.begin(), failed.end());
        scores.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
        if (records.empty()) {
            scores.mean_iou = std::numeric_limits<double>::quiet_NaN();
        } else {
            double sum = 0.0;
            for (double v : scores.ious) {
                sum += v;
            }
            scores.mean_iou = sum / static_cast<double>(records.size());
        }
    }
    return out;
}

MethodScores evaluate_denoiser(std::string name, const Denoiser& denoiser,
                               const std::vector<EvalBin>& bins, int jobs) {
    return evaluate_method(
        std::move(name), [&denoiser](const EvalRecord& r) { return denoiser(*r.noisy); }, bins,
        jobs);
}

std::vector<bool> mark_best(std::span<const std::vector<double>> per_method, double alpha) {
    if (per_method.empty()) {
        throw std::invalid_argument("mark_best: no methods");
    }
    const std::size_t n = per_method.front().size();
    for (const auto& scores : per_method) {
        if (scores.size() != n) {
            throw std::invalid_argument("mark_best: methods were scored on different record sets");
        }
    }
    std::vector<bool> bold(per_method.size(), false);
    if (n < 2) {
        bold.assign(per_method.size(), true);
        return bold;
    }
    std::vector<double> means;
    for (const auto& scores : per_method) {
        means.push_back(std::accumulate(scores.begin(), scores.end(), 0.0) /
                        static_cast<double>(n));
    }
    const double top = *std::max_element(means.begin(), means.end());
    const auto best = static_cast<std::size_t>(
        std::find(means.begin(), means.end(), top) - means.begin());
    for (std::size_t m = 0; m < per_method.size(); ++m) {
        if (means[m] == top) {
            bold[m] = true;
            continue;
        }
        const auto res = paired_one_sided_t_test(per_method[m], per_method[best], alpha);
        bold[m] = !res.significant;
    }
    return bold;
}

ReportSection build_section(std::string noise_kind, const std::vector<EvalBin>& bins,
                            const std::vector<MethodScores>& methods, double alpha) {
    ReportSection sec;
    sec.noise_kind = std::move(noise_kind);
    for (const auto& m : methods) {
        if (m.bins.size() != bins.size()) {
            throw std::invalid_argument("build_section: method '" + m.name +
                                        "' was scored on a different binning");
        }
        sec.methods.push_back(m.name);
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
        ReportRow row;
        row.lo = bins[b].lo;
        row.hi = bins[b].hi;
        row.n = bins[b].records.size();
        std::vector<std::vector<double>> scores;
        for (const auto& m : methods) {
            scores.push_back(m.bins[b].ious);
        }
        std::vector<bool> bold(methods.size(), false);
        if (!bins[b].records.empty() && !methods.empty()) {
            bold = mark_best(scores, alpha);
        }
        for (std::size_t m = 0; m < methods.size(); ++m) {
            ReportCell cell;
            if (!bins[b].records.empty()) {
                cell.mean_iou = methods[m].bins[b].mean_iou;
            }
            cell.bold = bold[m];
            cell.failures = methods[m].bins[b].failures;
            row.cells.push_back(cell);
        }
        sec.rows.push_back(std::move(row));
    }
    return sec;
}

}  // namespace shapebench
