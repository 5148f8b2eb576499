#pragma once

// Exact rational numbers backed by GMP.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace seqpack {

/// Arbitrary-precision rational in lowest terms with a positive denominator.
///
/// A thin value wrapper over mpq_class so that arithmetic never produces
/// lazily-evaluated expression templates and every result is canonical.
class Rat
{
public:
    Rat() = default;
    Rat(int value) : m_value(value) {}
    Rat(long value) : m_value(value) {}
    Rat(long long value) : m_value(static_cast<long>(value)) {}
    Rat(long numerator, long denominator);
    explicit Rat(mpq_class value);

    /// Parses "7", "-7/2", "2.5", "-0.125". Throws std::invalid_argument.
    static Rat parse(std::string_view text);

    /// Lowest-terms text: "n" when integral, otherwise "n/d".
    std::string str() const;
    double to_double() const { return m_value.get_d(); }

    int sign() const { return sgn(m_value); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return m_value.get_den() == 1; }

    mpz_class numerator() const { return m_value.get_num(); }
    mpz_class denominator() const { return m_value.get_den(); }
    const mpq_class& raw() const { return m_value; }

    Rat operator-() const { return Rat(mpq_class(-m_value)); }

    Rat& operator+=(const Rat& other);
    Rat& operator-=(const Rat& other);
    Rat& operator*=(const Rat& other);
    /// Throws std::domain_error on division by zero.
    Rat& operator/=(const Rat& other);

    friend Rat operator+(Rat lhs, const Rat& rhs) { return lhs += rhs; }
    friend Rat operator-(Rat lhs, const Rat& rhs) { return lhs -= rhs; }
    friend Rat operator*(Rat lhs, const Rat& rhs) { return lhs *= rhs; }
    friend Rat operator/(Rat lhs, const Rat& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rat& lhs, const Rat& rhs) { return cmp(lhs.m_value, rhs.m_value) == 0; }
    friend std::strong_ordering operator<=>(const Rat& lhs, const Rat& rhs)
    {
        const int c = cmp(lhs.m_value, rhs.m_value);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class m_value;
};

std::ostream& operator<<(std::ostream& os, const Rat& value);

Rat abs(const Rat& value);
Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);

/// Decimal rendering with a fixed number of fractional digits, rounded half
/// away from zero. Display only; never parsed back.
std::string to_decimal(const Rat& value, int digits = 6);

} // namespace seqpack
