#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

namespace lm4opt::jsonl {

// Reads a line-delimited record file. Calls `fn(line_number, record)` for
// every non-blank line; line numbers are 1-based. Throws the exception built
// by `make_error` on unreadable files or unparseable lines.
void for_each_record(const std::filesystem::path& path,
                     const std::function<void(std::size_t, const nlohmann::json&)>& fn,
                     const std::function<std::exception(std::string)>& make_error);

// Serializes one record per line with a trailing newline.
std::string dump_records(const std::vector<nlohmann::ordered_json>& records);

}  // namespace lm4opt::jsonl
