#pragma once

// Shared error taxonomy and the checked-mode switch.
//
// Every failure surfaced to a caller is one of the categories below so the
// CLI can map it to a stable exit code. Checked mode adds finiteness scans
// after tensor-producing operations; it is on by default and can be turned
// off for throughput runs.

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slr {

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EvaluationError : std::runtime_error {
    explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::atomic<bool>& checked_mode_flag() {
    static std::atomic<bool> flag{true};
    return flag;
}

inline bool checked_mode() { return checked_mode_flag().load(std::memory_order_relaxed); }
inline void set_checked_mode(bool on) { checked_mode_flag().store(on, std::memory_order_relaxed); }

} // namespace slr
