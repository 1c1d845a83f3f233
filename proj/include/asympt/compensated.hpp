#pragma once

#include <cmath>

namespace asympt {

/// Neumaier's variant of Kahan summation: the rounding error of every addition
/// is carried separately and folded back in when the sum is read.
template <typename Real>
class CompensatedSum {
public:
    CompensatedSum& operator+=(Real value) {
        const Real t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    Real value() const { return sum_ + compensation_; }

private:
    Real sum_{0};
    Real compensation_{0};
};

} // namespace asympt
