#include "lm4opt/jsonl.hpp"

#include <fstream>

namespace lm4opt::jsonl {

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(std::size_t, const nlohmann::json&)>& fn,
                     const std::function<std::exception(std::string)>& make_error) {
    std::ifstream in(path);
    if (!in) {
        throw make_error("cannot open file: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            throw make_error("malformed record at line " + std::to_string(line_no) + " of " +
                             path.string());
        }
        fn(line_no, rec);
    }
}

std::string dump_records(const std::vector<nlohmann::ordered_json>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += rec.dump();
        out += '\n';
    }
    return out;
}

}  // namespace lm4opt::jsonl
