#pragma once

#include <cmath>

namespace arbhedge {

/// Neumaier-compensated running sum.
class KahanSum {
public:
    KahanSum& operator+=(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace arbhedge
