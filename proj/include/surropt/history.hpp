#ifndef SURROPT_HISTORY_HPP
#define SURROPT_HISTORY_HPP

#include <optional>
#include <string>
#include <vector>

#include "surropt/common.hpp"
#include "surropt/driver.hpp"

namespace surropt {

enum class HistoryFormat { Csv, Json };

HistoryFormat parse_history_format(const std::string& s);

struct HistoryRow {
    long eval_index = 0;
    int epoch = 0;
    Vector point;
    double value = 0.0;
    double best_so_far = 0.0;
    std::optional<double> w_r;  // absent for design and SurfMin points
    double sigma = 1.0;
};

/// One row per evaluation, best_so_far = running minimum of value.
std::vector<HistoryRow> make_history_rows(const RunResult& result);

/// CSV: header "eval_index,epoch,x1..xd,value,best_so_far,w_r,sigma",
/// numbers with 17 significant digits (w_r empty when not applicable).
/// JSON: array of row objects (w_r null when not applicable).
void write_history(const std::vector<HistoryRow>& rows, HistoryFormat format,
                   const std::string& path);

/// Inverse of write_history, for diagnostics and round-trip checks.
std::vector<HistoryRow> read_history(const std::string& path, HistoryFormat format);

}  // namespace surropt

#endif
