#include "bicont/report_json.hpp"

namespace bicont {

nlohmann::json to_json(const CheckReport& report) {
    nlohmann::json parameters = nlohmann::json::object();
    for (const auto& [name, value] : report.parameters) {
        std::visit([&](const auto& v) { parameters[name] = v; }, value);
    }
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : report.witnesses) {
        witnesses.push_back({{"input_id", w.input_id},
                             {"lambda", w.lambda},
                             {"n", w.n ? nlohmann::json(*w.n) : nlohmann::json(nullptr)},
                             {"lhs", w.lhs},
                             {"rhs", w.rhs}});
    }
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& sub : report.sub_reports) {
        subs.push_back(to_json(sub));
    }
    return {{"check_name", report.check_name},
            {"parameters", std::move(parameters)},
            {"passed", report.passed},
            {"tolerance", report.tolerance},
            {"witnesses", std::move(witnesses)},
            {"notes", report.notes},
            {"sub_reports", std::move(subs)}};
}

}  // namespace bicont
