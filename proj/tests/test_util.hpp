#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

inline std::filesystem::path asset_path(const std::string& rel) {
    return std::filesystem::path(LM4OPT_ASSET_DIR) / rel;
}

// Writes content to a unique temp file, removed on destruction.
class TempFile {
  public:
    explicit TempFile(const std::string& content, const std::string& suffix = ".jsonl") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lm4opt_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)) + suffix);
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lm4opt_dir_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
