#pragma once

#include <cstdint>

namespace apb {

// Decision stump h(x) = p * sign(x[k] - tau) with sign(0) := +1,
// i.e. h(x) = p when x[k] >= tau and -p otherwise.  k is 1-based.
struct Stump {
    std::int8_t p = +1;  // polarity, +1 or -1
    int k = 1;           // feature index
    double tau = 0.0;    // threshold

    std::int8_t predict(double value) const {
        return static_cast<std::int8_t>(value >= tau ? p : -p);
    }

    bool operator==(const Stump& o) const { return p == o.p && k == o.k && tau == o.tau; }
};

}  // namespace apb
