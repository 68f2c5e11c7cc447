#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ies/dppo.hpp"
#include "ies/env.hpp"

namespace ies {

inline constexpr const char* kTrainLogHeader =
    "episode,reward,ma_reward,actor_loss,critic_loss,seconds";
inline constexpr const char* kDispatchHeader =
    "period,p_chp,h_chp,p_cwp,w_cwp,p_gt,h_gb,p_wt,p_load,h_load,w_load,imbalance_d,cost";
inline constexpr const char* kCompareHeader = "method,operating_cost,calc_time_s,train_time_s";

std::string format_train_log_row(const TrainLogRow& row);
std::vector<TrainLogRow> read_train_log(const std::string& path);

struct DispatchRow {
    std::size_t period = 0;  ///< 1-based
    DispatchDecision decision;
    PeriodLoads loads;
    double imbalance_d = 0.0;
    double cost = 0.0;
};

std::vector<DispatchRow> dispatch_rows(const Scenario& scenario,
                                       const std::vector<StepInfo>& steps);
void write_dispatch_csv(const std::vector<DispatchRow>& rows, const std::string& path);
std::vector<DispatchRow> read_dispatch_csv(const std::string& path);

struct CompareRow {
    std::string method;
    double operating_cost = 0.0;
    double calc_time_s = 0.0;
    std::optional<double> train_time_s;  ///< empty cell for non-learning methods
};

void write_compare_csv(const std::vector<CompareRow>& rows, const std::string& path);
std::vector<CompareRow> read_compare_csv(const std::string& path);

}  // namespace ies
