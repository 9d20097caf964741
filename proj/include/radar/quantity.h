#ifndef RADAR_QUANTITY_H
#define RADAR_QUANTITY_H

#include <boost/rational.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace radar {
// Exact resource amounts.
using Quantity = boost::rational<long long>;

// Accepts "3", "2.5" and "5/2". Throws std::invalid_argument.
Quantity parse_quantity(std::string_view text);
// "3" for integers, "5/2" otherwise.
std::string format_quantity(const Quantity &q);

class Deadline {
    std::optional<std::chrono::steady_clock::time_point> at;
public:
    Deadline() = default;
    static Deadline after(std::chrono::milliseconds budget) {
        Deadline d;
        d.at = std::chrono::steady_clock::now() + budget;
        return d;
    }
    bool expired() const {
        return at && std::chrono::steady_clock::now() >= *at;
    }
};
}

#endif
