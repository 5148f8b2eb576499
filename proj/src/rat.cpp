#include "seqpack/rat.hpp"

#include <ostream>
#include <stdexcept>

namespace seqpack {

Rat::Rat(long numerator, long denominator)
{
    if (denominator == 0)
        throw std::domain_error("rational with zero denominator");
    m_value = mpq_class(mpz_class(numerator), mpz_class(denominator));
    m_value.canonicalize();
}

Rat::Rat(mpq_class value) : m_value(std::move(value))
{
    m_value.canonicalize();
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

} // namespace

Rat Rat::parse(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);

    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto bad = [&] { return std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };

    mpq_class value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw bad();
        mpz_class d{std::string(den), 10};
        if (d == 0)
            throw bad();
        value = mpq_class(mpz_class(std::string(num), 10), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw bad();
        mpz_class scale = 1;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        value = mpq_class(digits, scale);
    } else {
        if (!all_digits(s))
            throw bad();
        value = mpq_class(mpz_class(std::string(s), 10));
    }
    value.canonicalize();
    if (negative)
        value = -value;
    return Rat(std::move(value));
}

std::string Rat::str() const
{
    return m_value.get_str();
}

Rat& Rat::operator+=(const Rat& other)
{
    m_value += other.m_value;
    return *this;
}

Rat& Rat::operator-=(const Rat& other)
{
    m_value -= other.m_value;
    return *this;
}

Rat& Rat::operator*=(const Rat& other)
{
    m_value *= other.m_value;
    return *this;
}

Rat& Rat::operator/=(const Rat& other)
{
    if (other.is_zero())
        throw std::domain_error("rational division by zero");
    m_value /= other.m_value;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& value)
{
    return os << value.str();
}

Rat abs(const Rat& value)
{
    return value.sign() < 0 ? -value : value;
}

Rat min(const Rat& a, const Rat& b)
{
    return b < a ? b : a;
}

Rat max(const Rat& a, const Rat& b)
{
    return a < b ? b : a;
}

std::string to_decimal(const Rat& value, int digits)
{
    mpz_class scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const mpz_class num = abs(value).numerator() * scale;
    const mpz_class den = value.denominator();
    mpz_class q = num / den;
    if (2 * (num - q * den) >= den)
        q += 1;

    std::string s = q.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits))
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    if (value.sign() < 0 && q != 0)
        s.insert(0, "-");
    return s;
}

} // namespace seqpack
