#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

#include "cutfn/construct.hpp"
#include "cutfn/limit.hpp"
#include "cutfn/pwl.hpp"
#include "cutfn/report.hpp"

namespace cutfn {

// Ordered JSON keeps field order fixed, which together with canonical
// rational text makes every serialization byte-deterministic.
using ojson = nlohmann::ordered_json;

ojson function_to_json(const PwlFunction& f);
PwlFunction function_from_json(const ojson& j);

ojson schedule_to_json(const EpsilonSchedule& s);
EpsilonSchedule schedule_from_json(const ojson& j);

ojson report_to_json(const VerificationReport& r);
ojson evaluation_to_json(const LimitEvaluation& e);

// Canonical rendering: two-space indent, trailing newline.
std::string dump_json(const ojson& j);

PwlFunction load_function(const std::filesystem::path& file);
EpsilonSchedule load_schedule(const std::filesystem::path& file);
std::string read_text(const std::filesystem::path& file);
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace cutfn
