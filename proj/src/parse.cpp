#include "wak/parse.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "wak/errors.hpp"

namespace wak {

namespace {

class Parser {
public:
    Parser(std::string_view s, const ParseOptions& opt) : s_(s), opt_(opt) {}

    SparsePoly parse() {
        SparsePoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("parse error at " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    SparsePoly expr() {
        SparsePoly acc = term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    SparsePoly term() {
        SparsePoly acc = unary();
        for (;;) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                SparsePoly d = unary();
                if (d.is_zero()) fail("division by zero");
                if (d.size() != 1 || d.terms().front().mono.has_vars()) fail("division by a non-constant");
                acc = acc.scaled(d.terms().front().coeff.inverse());
            } else {
                return acc;
            }
        }
    }

    SparsePoly unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    SparsePoly power() {
        SparsePoly base = atom();
        if (!eat('^')) return base;
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an exponent");
        int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
        SparsePoly r = SparsePoly::constant(1);
        for (int i = 0; i < e; ++i) r = r * base;
        return r;
    }

    SparsePoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (eat('(')) {
            SparsePoly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return SparsePoly::constant(LevelScalar(BigRational::parse(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            return identifier(std::string(s_.substr(start, pos_ - start)));
        }
        fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }

    SparsePoly identifier(const std::string& id) {
        const LevelScalar k = LevelScalar::k();
        if (id == "k") return SparsePoly::constant(k);
        if (id == "c") return SparsePoly::constant(k + LevelScalar(1));
        if (id == "cp") return SparsePoly::constant((k + LevelScalar(2)) * LevelScalar::rational(1, 2));
        if (id == "cm") return SparsePoly::constant(-k * LevelScalar::rational(1, 2));
        if (opt_.pde) {
            if (id == "t") return SparsePoly::variable(opt_.relabel.t);
            if (id == "x") return SparsePoly::variable(opt_.relabel.x);
            if (id == "y") return SparsePoly::variable(opt_.relabel.y);
            if (id == "u") return SparsePoly::variable(jet(0, 0, 0));
            if (id.rfind("u_", 0) == 0) {
                int o[3] = {0, 0, 0};
                for (char ch : id.substr(2)) {
                    if (ch == 't')
                        ++o[0];
                    else if (ch == 'x')
                        ++o[1];
                    else if (ch == 'y')
                        ++o[2];
                    else
                        fail("bad jet " + id);
                }
                return SparsePoly::variable(jet(o[0], o[1], o[2]));
            }
        }
        static const std::pair<const char*, Family> prefixes[] = {
            {"xbar", Family::XBAR}, {"ybar", Family::YBAR}, {"tbar", Family::TBAR}, {"du", Family::U},
            {"dv", Family::V},      {"dw", Family::W},      {"Dx", Family::DX},     {"Dy", Family::DY},
            {"Dt", Family::DT},     {"x", Family::X},       {"y", Family::Y},       {"t", Family::T},
            {"p", Family::PARAM},
        };
        for (const auto& [pre, fam] : prefixes) {
            const std::string p(pre);
            if (id.size() <= p.size() || id.compare(0, p.size(), p) != 0) continue;
            const std::string rest = id.substr(p.size());
            if (!std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
                continue;
            int idx = std::stoi(rest);
            if (idx <= 0) fail("index must be positive in " + id);
            return SparsePoly::variable(var(fam, idx));
        }
        fail("unknown identifier " + id);
    }

    std::string_view s_;
    const ParseOptions& opt_;
    std::size_t pos_ = 0;
};

}  // namespace

SparsePoly parse_poly(std::string_view text, const ParseOptions& opt) { return Parser(text, opt).parse(); }

}  // namespace wak
