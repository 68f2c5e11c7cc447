#include "ies/reports.hpp"

#include <fstream>

#include "ies/errors.hpp"
#include "ies/util.hpp"

namespace ies {

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path, const char* header,
                                               std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != header) {
        throw ConfigError(path + ": bad header, expected '" + std::string(header) + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(trim(line), ',');
        if (cells.size() != columns) {
            throw ConfigError(path + ": row " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " columns, expected " +
                              std::to_string(columns));
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

std::string format_train_log_row(const TrainLogRow& row) {
    return std::to_string(row.episode) + ',' + format_double(row.reward) + ',' +
           format_double(row.ma_reward) + ',' + format_double(row.actor_loss) + ',' +
           format_double(row.critic_loss) + ',' + format_double(row.seconds);
}

std::vector<TrainLogRow> read_train_log(const std::string& path) {
    std::vector<TrainLogRow> log;
    for (const auto& cells : read_csv(path, kTrainLogHeader, 6)) {
        TrainLogRow row;
        row.episode = static_cast<std::size_t>(parse_long(cells[0]));
        row.reward = parse_double(cells[1]);
        row.ma_reward = parse_double(cells[2]);
        row.actor_loss = parse_double(cells[3]);
        row.critic_loss = parse_double(cells[4]);
        row.seconds = parse_double(cells[5]);
        log.push_back(row);
    }
    return log;
}

std::vector<DispatchRow> dispatch_rows(const Scenario& scenario,
                                       const std::vector<StepInfo>& steps) {
    if (steps.size() != scenario.periods()) {
        throw std::invalid_argument("step count does not match scenario periods");
    }
    std::vector<DispatchRow> rows(steps.size());
    for (std::size_t t = 0; t < steps.size(); ++t) {
        rows[t].period = t + 1;
        rows[t].decision = steps[t].decision;
        rows[t].loads = slice(scenario, t);
        rows[t].imbalance_d = steps[t].imbalance_d;
        rows[t].cost = steps[t].cost_total;
    }
    return rows;
}

void write_dispatch_csv(const std::vector<DispatchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << kDispatchHeader << "\n";
    for (const DispatchRow& r : rows) {
        out << r.period << ',' << format_double(r.decision.p_chp) << ','
            << format_double(r.decision.h_chp) << ',' << format_double(r.decision.p_cwp) << ','
            << format_double(r.decision.w_cwp) << ',' << format_double(r.decision.p_gt) << ','
            << format_double(r.decision.h_gb) << ',' << format_double(r.loads.p_wt) << ','
            << format_double(r.loads.p_load) << ',' << format_double(r.loads.h_load) << ','
            << format_double(r.loads.w_load) << ',' << format_double(r.imbalance_d) << ','
            << format_double(r.cost) << "\n";
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::vector<DispatchRow> read_dispatch_csv(const std::string& path) {
    std::vector<DispatchRow> rows;
    for (const auto& cells : read_csv(path, kDispatchHeader, 13)) {
        DispatchRow r;
        r.period = static_cast<std::size_t>(parse_long(cells[0]));
        r.decision.p_chp = parse_double(cells[1]);
        r.decision.h_chp = parse_double(cells[2]);
        r.decision.p_cwp = parse_double(cells[3]);
        r.decision.w_cwp = parse_double(cells[4]);
        r.decision.p_gt = parse_double(cells[5]);
        r.decision.h_gb = parse_double(cells[6]);
        r.loads.p_wt = parse_double(cells[7]);
        r.loads.p_load = parse_double(cells[8]);
        r.loads.h_load = parse_double(cells[9]);
        r.loads.w_load = parse_double(cells[10]);
        r.imbalance_d = parse_double(cells[11]);
        r.cost = parse_double(cells[12]);
        rows.push_back(r);
    }
    return rows;
}

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << kCompareHeader << "\n";
    for (const CompareRow& r : rows) {
        out << r.method << ',' << format_double(r.operating_cost) << ','
            << format_double(r.calc_time_s) << ','
            << (r.train_time_s ? format_double(*r.train_time_s) : "") << "\n";
    }
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::vector<CompareRow> read_compare_csv(const std::string& path) {
    std::vector<CompareRow> rows;
    for (const auto& cells : read_csv(path, kCompareHeader, 4)) {
        CompareRow r;
        r.method = cells[0];
        r.operating_cost = parse_double(cells[1]);
        r.calc_time_s = parse_double(cells[2]);
        if (!trim(cells[3]).empty()) r.train_time_s = parse_double(cells[3]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace ies
