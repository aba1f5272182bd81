#ifndef LESIONSEG_EVALUATION_HPP
#define LESIONSEG_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lesionseg/mask.hpp"

namespace lesionseg {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// Recall = tp / (tp + fn); precision = tp / (tp + fp). A zero denominator
/// reports the metric as 0 with its undefined flag set instead of failing.
struct Metrics {
    double recall = 0.0;
    double precision = 0.0;
    bool undefined_recall = false;
    bool undefined_precision = false;
};

struct EvalRow {
    std::string id;
    double recall = 0.0;
    double precision = 0.0;
    bool undefined_recall = false;
    bool undefined_precision = false;
};

/// Rows plus their arithmetic-mean averages (fractions, not percentages;
/// renderers convert to percent).
struct EvalTable {
    std::vector<EvalRow> rows;
    double average_recall = 0.0;
    double average_precision = 0.0;
};

struct EvalCase {
    std::string id;
    BinaryMask pred;
    BinaryMask ref;
};

/// Per-pixel tally of pred against ref. Throws DimensionMismatch.
ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& ref);

Metrics metrics(const ConfusionCounts& c);

/// Averages appended over the given rows. Throws InvalidArgument on an
/// empty row list.
EvalTable build_table(std::vector<EvalRow> rows);

/// Score every case and assemble the table; a failing case reports its id.
EvalTable batch_evaluate(const std::vector<EvalCase>& cases);

/// CSV with header id,recall,precision, one row per case, and a final
/// AVERAGE row; values are percentages rounded to 2 decimals at render
/// time only.
std::string render_csv(const EvalTable& table);

/// JSON mirror of the CSV with undefined_recall/undefined_precision flags.
nlohmann::ordered_json render_json(const EvalTable& table);

} // namespace lesionseg

#endif
