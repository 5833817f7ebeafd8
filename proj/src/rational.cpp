#include "idyn/rational.hpp"

#include <cctype>

namespace idyn {

std::string rat_str(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::optional<Rational> rat_parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        BigInt d(den);
        if (d == 0) return std::nullopt;
        return Rational(BigInt(num), d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!is_int(whole)) return std::nullopt;
        if (frac.empty()) return Rational(BigInt(whole));
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt w(whole);
        BigInt f(frac);
        bool neg = !whole.empty() && whole[0] == '-';
        Rational r = Rational(w) + (neg ? -Rational(f, scale) : Rational(f, scale));
        return r;
    }
    if (!is_int(text)) return std::nullopt;
    return Rational(BigInt(text));
}

}  // namespace idyn
