#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace transonic {

// Ordered key = value diagnostics, written as plain text.
class SolveReport {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);
    void set(const std::string& key, const std::vector<double>& values);

    std::optional<std::string> get(const std::string& key) const;
    double number(const std::string& key) const;  // throws std::out_of_range
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void write(std::ostream& os) const;
    void merge(const SolveReport& other, const std::string& prefix = "");

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_number(double v);

}  // namespace transonic
