#include "surropt/history.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace surropt {

HistoryFormat parse_history_format(const std::string& s) {
    if (s == "csv") return HistoryFormat::Csv;
    if (s == "json") return HistoryFormat::Json;
    throw config_error("unknown history format '" + s + "'; valid: csv json");
}

std::vector<HistoryRow> make_history_rows(const RunResult& result) {
    std::vector<HistoryRow> rows;
    rows.reserve(result.history.size());
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < result.history.size(); ++i) {
        const EvaluationRecord& rec = result.history[i];
        best = std::min(best, rec.value);
        HistoryRow row;
        row.eval_index = rec.eval_index;
        row.epoch = rec.epoch;
        row.point = rec.point;
        row.value = rec.value;
        row.best_so_far = best;
        if (i < result.annotations.size()) {
            row.w_r = result.annotations[i].w_r;
            row.sigma = result.annotations[i].sigma;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_history(const std::vector<HistoryRow>& rows, HistoryFormat format,
                   const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("write_history: no records");
    std::ofstream out(path);
    if (!out) throw config_error("cannot write history file: " + path);
    const Eigen::Index d = rows.front().point.size();

    if (format == HistoryFormat::Csv) {
        out << "eval_index,epoch";
        for (Eigen::Index j = 0; j < d; ++j) out << ",x" << j + 1;
        out << ",value,best_so_far,w_r,sigma\n";
        for (const auto& r : rows) {
            out << r.eval_index << "," << r.epoch;
            for (Eigen::Index j = 0; j < d; ++j) out << "," << num(r.point(j));
            out << "," << num(r.value) << "," << num(r.best_so_far) << ",";
            if (r.w_r) out << num(*r.w_r);
            out << "," << num(r.sigma) << "\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json o;
            o["eval_index"] = r.eval_index;
            o["epoch"] = r.epoch;
            auto pt = nlohmann::json::array();
            for (Eigen::Index j = 0; j < d; ++j) pt.push_back(r.point(j));
            o["point"] = std::move(pt);
            o["value"] = r.value;
            o["best_so_far"] = r.best_so_far;
            o["w_r"] = r.w_r ? nlohmann::json(*r.w_r) : nlohmann::json(nullptr);
            o["sigma"] = r.sigma;
            arr.push_back(std::move(o));
        }
        out << arr.dump(2) << "\n";
    }
    if (!out) throw config_error("failed while writing history file: " + path);
}

std::vector<HistoryRow> read_history(const std::string& path, HistoryFormat format) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open history file: " + path);
    std::vector<HistoryRow> rows;

    if (format == HistoryFormat::Csv) {
        std::string line;
        if (!std::getline(in, line)) throw config_error("empty history file: " + path);
        const long n_cols = 1 + std::count(line.begin(), line.end(), ',');
        const Eigen::Index d = static_cast<Eigen::Index>(n_cols - 6);
        if (d < 1) throw config_error("malformed history header: " + path);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cell;
            std::istringstream ls(line);
            std::string c;
            while (std::getline(ls, c, ',')) cell.push_back(c);
            if (line.back() == ',') cell.push_back("");
            if (static_cast<long>(cell.size()) != n_cols)
                throw config_error("malformed history row: " + line);
            HistoryRow r;
            r.eval_index = std::stol(cell[0]);
            r.epoch = std::stoi(cell[1]);
            r.point.resize(d);
            for (Eigen::Index j = 0; j < d; ++j)
                r.point(j) = std::stod(cell[static_cast<size_t>(2 + j)]);
            r.value = std::stod(cell[static_cast<size_t>(2 + d)]);
            r.best_so_far = std::stod(cell[static_cast<size_t>(3 + d)]);
            const std::string& wr = cell[static_cast<size_t>(4 + d)];
            if (!wr.empty()) r.w_r = std::stod(wr);
            r.sigma = std::stod(cell[static_cast<size_t>(5 + d)]);
            rows.push_back(std::move(r));
        }
    } else {
        nlohmann::json arr = nlohmann::json::parse(in);
        for (const auto& o : arr) {
            HistoryRow r;
            r.eval_index = o.at("eval_index").get<long>();
            r.epoch = o.at("epoch").get<int>();
            const auto& pt = o.at("point");
            r.point.resize(static_cast<Eigen::Index>(pt.size()));
            for (size_t j = 0; j < pt.size(); ++j)
                r.point(static_cast<Eigen::Index>(j)) = pt[j].get<double>();
            r.value = o.at("value").get<double>();
            r.best_so_far = o.at("best_so_far").get<double>();
            if (!o.at("w_r").is_null()) r.w_r = o.at("w_r").get<double>();
            r.sigma = o.at("sigma").get<double>();
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace surropt
