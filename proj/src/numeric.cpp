#include <apollo/numeric.hpp>

#include <apollo/errors.hpp>

#include <cctype>
#include <cstdlib>

namespace apollo {

std::optional<Int> exact_sqrt(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

std::optional<Rat> exact_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    auto n = exact_sqrt(num(r));
    if (!n) return std::nullopt;
    auto d = exact_sqrt(den(r));
    if (!d) return std::nullopt;
    return Rat(*n, *d);
}

Int floor_rat(const Rat& r) {
    Int q = num(r) / den(r);
    // Integer division truncates toward zero; fix up negatives.
    if (q * den(r) != num(r) && r < 0) --q;
    return q;
}

bool int_less_than(const Int& k, const Rat& r) { return Rat(k) < r; }

double to_double(const Rat& r) { return static_cast<double>(r); }

std::string rat_to_string(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw ValidationError("empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int n(text.substr(0, slash));
        Int d(text.substr(slash + 1));
        if (d == 0) throw ValidationError("zero denominator in '" + text + "'");
        return Rat(n, d);
    }
    // Plain integer, or a decimal/scientific literal converted exactly.
    bool simple = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) continue;
        if ((c == '+' || c == '-') && i == 0) continue;
        simple = false;
        break;
    }
    if (simple) return Rat(Int(text));

    auto epos = text.find_first_of("eE");
    std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
    long expo = 0;
    if (epos != std::string::npos) {
        char* end = nullptr;
        expo = std::strtol(text.c_str() + epos + 1, &end, 10);
        if (end != text.c_str() + text.size())
            throw ValidationError("bad exponent in '" + text + "'");
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    long frac_digits = 0;
    if (dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        frac_digits = static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits == "+" || digits == "-")
        throw ValidationError("bad number '" + text + "'");
    for (std::size_t i = 0; i < digits.size(); ++i) {
        char c = digits[i];
        bool sign_ok = (c == '+' || c == '-') && i == 0;
        if (!sign_ok && !std::isdigit(static_cast<unsigned char>(c)))
            throw ValidationError("bad number '" + text + "'");
    }
    Rat value{Int(digits)};
    long shift = expo - frac_digits;
    Int p10 = 1;
    for (long i = 0; i < (shift < 0 ? -shift : shift); ++i) p10 *= 10;
    if (shift >= 0) return value * Rat(p10);
    return value / Rat(p10);
}

}  // namespace apollo
