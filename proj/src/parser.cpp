#include <cctype>
#include <cstdint>

#include "canlink/poly.hpp"

// Recursive-descent parser for the published grammar:
//
//   polynomial := ['+'|'-'] term { ('+'|'-') term }
//   term       := factor { '*' factor }
//   factor     := atom [ '^' natural ]
//   atom       := rational | identifier | '(' polynomial ')'
//   rational   := natural [ '/' natural ]
//   identifier := [A-Za-z][A-Za-z0-9_]*
//
// Whitespace is insignificant. Exponents are capped to keep pathological
// inputs from exhausting memory.

namespace canlink {

namespace {

constexpr std::int64_t kMaxExponent = 1'000'000;

class Parser {
  public:
    Parser(const std::string& text, const TablePtr& table) : s_(text), table_(table) {}

    Poly run() {
        Poly p = polynomial();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool accept(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly polynomial() {
        Poly acc = Poly::zero(table_);
        bool neg = false;
        skip_ws();
        if (accept('-'))
            neg = true;
        else
            accept('+');
        acc = acc + term(neg);
        while (true) {
            skip_ws();
            if (accept('+'))
                acc = acc + term(false);
            else if (accept('-'))
                acc = acc + term(true);
            else
                break;
        }
        return acc;
    }

    Poly term(bool neg) {
        Poly acc = factor();
        while (accept('*')) acc = acc * factor();
        return neg ? -acc : acc;
    }

    Poly factor() {
        Poly base = atom();
        if (accept('^')) {
            std::int64_t e = natural();
            return base.pow(e);
        }
        return base;
    }

    Poly atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return rational();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (accept('(')) {
            Poly p = polynomial();
            if (!accept(')')) fail("expected ')'");
            return p;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected digits");
        return s_.substr(start, pos_ - start);
    }

    std::int64_t natural() {
        std::size_t at = pos_;
        std::string d = digits();
        if (d.size() > 7) throw ParseError("exponent too large", at);
        std::int64_t v = std::stoll(d);
        if (v > kMaxExponent) throw ParseError("exponent too large", at);
        return v;
    }

    Poly rational() {
        std::string num = digits();
        if (accept('/')) {
            std::size_t at = pos_;
            std::string den = digits();
            if (den.find_first_not_of('0') == std::string::npos)
                throw ParseError("zero denominator", at);
            return Poly::constant(table_, Rat::from_string(num + "/" + den));
        }
        return Poly::constant(table_, Rat::from_string(num));
    }

    Poly identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        auto idx = table_->find(name);
        if (!idx) throw ParseError("unknown identifier '" + name + "'", start);
        return Poly::variable(table_, *idx);
    }

    const std::string& s_;
    TablePtr table_;
    std::size_t pos_ = 0;
};

} // namespace

Poly parse_poly(const std::string& text, const TablePtr& table) {
    return Parser(text, table).run();
}

Poly parse_poly(const std::string& text, const std::vector<std::string>& names) {
    return Parser(text, VarTable::make(names)).run();
}

} // namespace canlink
