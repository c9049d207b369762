// Copyright 2026 The nlg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "nlg/errors.hpp"

namespace nlg {

/// Exact fraction with 64-bit parts, always stored in lowest terms with a
/// positive denominator.
class Rational {
   public:
    constexpr Rational() = default;
    constexpr Rational(int64_t num) : num_(num), den_(1) {
    }
    Rational(int64_t num, int64_t den) : num_(num), den_(den) {
        if (den == 0) {
            throw DomainError("Rational with zero denominator");
        }
        normalize();
    }

    int64_t num() const {
        return num_;
    }
    int64_t den() const {
        return den_;
    }
    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rational operator+(const Rational &a, const Rational &b) {
        int64_t g = std::gcd(a.den_, b.den_);
        return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
    }
    friend Rational operator-(const Rational &a, const Rational &b) {
        return a + Rational(-b.num_, b.den_);
    }
    friend Rational operator*(const Rational &a, const Rational &b) {
        int64_t g1 = std::gcd(a.num_, b.den_);
        int64_t g2 = std::gcd(b.num_, a.den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        return Rational((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
    }
    friend bool operator==(const Rational &a, const Rational &b) = default;
    friend auto operator<=>(const Rational &a, const Rational &b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream &operator<<(std::ostream &out, const Rational &r) {
        return out << r.str();
    }

   private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    int64_t num_ = 0;
    int64_t den_ = 1;
};

}  // namespace nlg
