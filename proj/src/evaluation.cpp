#include "lesionseg/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

// Percent with exactly 2 decimals, e.g. 91.00. Applied only when rendering.
std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

double percent_value(double fraction) {
    return std::round(fraction * 10000.0) / 100.0;
}

} // namespace

ConfusionCounts confusion_counts(const BinaryMask& pred, const BinaryMask& ref) {
    if (pred.width != ref.width || pred.height != ref.height)
        throw DimensionMismatch("mask dimensions differ");
    ConfusionCounts c;
    const std::size_t n = pred.bits.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool p = pred.bits[i] != 0;
        const bool r = ref.bits[i] != 0;
        if (p && r)
            ++c.tp;
        else if (p && !r)
            ++c.fp;
        else if (!p && !r)
            ++c.tn;
        else
            ++c.fn;
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    Metrics m;
    const std::uint64_t actual = c.tp + c.fn;
    const std::uint64_t labeled = c.tp + c.fp;
    if (actual == 0)
        m.undefined_recall = true;
    else
        m.recall = static_cast<double>(c.tp) / static_cast<double>(actual);
    if (labeled == 0)
        m.undefined_precision = true;
    else
        m.precision = static_cast<double>(c.tp) / static_cast<double>(labeled);
    return m;
}

EvalTable build_table(std::vector<EvalRow> rows) {
    if (rows.empty())
        throw InvalidArgument("evaluation table needs at least one row");
    EvalTable table;
    double recall_sum = 0.0;
    double precision_sum = 0.0;
    for (const auto& row : rows) {
        recall_sum += row.recall;
        precision_sum += row.precision;
    }
    const double n = static_cast<double>(rows.size());
    table.average_recall = recall_sum / n;
    table.average_precision = precision_sum / n;
    table.rows = std::move(rows);
    return table;
}

EvalTable batch_evaluate(const std::vector<EvalCase>& cases) {
    if (cases.empty())
        throw InvalidArgument("no cases to evaluate");
    std::vector<EvalRow> rows;
    rows.reserve(cases.size());
    for (const auto& c : cases) {
        try {
            const Metrics m = metrics(confusion_counts(c.pred, c.ref));
            rows.push_back(
                {c.id, m.recall, m.precision, m.undefined_recall, m.undefined_precision});
        } catch (const Error& err) {
            throw DimensionMismatch("case '" + c.id + "': " + err.what());
        }
    }
    return build_table(std::move(rows));
}

std::string render_csv(const EvalTable& table) {
    std::string out = "id,recall,precision\n";
    for (const auto& row : table.rows) {
        out += row.id;
        out += ',';
        out += percent(row.recall);
        out += ',';
        out += percent(row.precision);
        out += '\n';
    }
    out += "AVERAGE,";
    out += percent(table.average_recall);
    out += ',';
    out += percent(table.average_precision);
    out += '\n';
    return out;
}

nlohmann::ordered_json render_json(const EvalTable& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        r["id"] = row.id;
        r["recall"] = percent_value(row.recall);
        r["precision"] = percent_value(row.precision);
        r["undefined_recall"] = row.undefined_recall;
        r["undefined_precision"] = row.undefined_precision;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["average_recall"] = percent_value(table.average_recall);
    j["average_precision"] = percent_value(table.average_precision);
    return j;
}

} // namespace lesionseg
