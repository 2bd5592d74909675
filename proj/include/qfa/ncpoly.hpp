#pragma once

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfa/coeff.hpp"

namespace qfa {

// ---------------------------------------------------------------------------
// Noncommutative polynomials over a finite generator alphabet, ordered
// degree-lexicographically, plus a bounded-degree rewriting engine with
// overlap completion.  Exact coefficients throughout.
// ---------------------------------------------------------------------------

using Word = std::vector<uint8_t>;

struct DegLexLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

class NCPoly {
public:
    using TermMap = std::map<Word, Coefficient, DegLexLess>;

    NCPoly() = default;

    static NCPoly scalar(const Coefficient& c) {
        NCPoly p;
        p.add_term(Word{}, c);
        return p;
    }
    static NCPoly generator(int id) {
        NCPoly p;
        p.add_term(Word{uint8_t(id)}, Coefficient::one());
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    long term_count() const { return long(terms_.size()); }
    long degree() const { return terms_.empty() ? -1 : long(terms_.rbegin()->first.size()); }

    // deglex-largest term
    const std::pair<const Word, Coefficient>& leading() const {
        if (terms_.empty()) throw std::logic_error("NCPoly: leading term of zero");
        return *terms_.rbegin();
    }

    void add_term(Word w, const Coefficient& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(w), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    NCPoly& operator+=(const NCPoly& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    NCPoly& operator-=(const NCPoly& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
    friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
    NCPoly operator-() const {
        NCPoly p;
        for (const auto& [w, c] : terms_) p.terms_.emplace(w, -c);
        return p;
    }
    friend NCPoly operator*(const NCPoly& a, const Coefficient& c) {
        NCPoly p;
        if (c.is_zero()) return p;
        for (const auto& [w, v] : a.terms_) p.terms_.emplace(w, v * c);
        return p;
    }
    friend NCPoly operator*(const Coefficient& c, const NCPoly& a) { return a * c; }
    friend NCPoly operator*(const NCPoly& a, const NCPoly& b) {
        NCPoly p;
        for (const auto& [wa, ca] : a.terms_)
            for (const auto& [wb, cb] : b.terms_) {
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                p.add_term(std::move(w), ca * cb);
            }
        return p;
    }
    friend bool operator==(const NCPoly& a, const NCPoly& b) {
        return a.terms_ == b.terms_;
    }

    std::string str(const std::function<std::string(int)>& namer = {}) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += "(" + print_coefficient(it->second) + ")";
            for (uint8_t g : it->first)
                s += "*" + (namer ? namer(int(g)) : "g" + std::to_string(int(g)));
        }
        return s;
    }

private:
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Oriented rewriting modulo a two-sided ideal, bounded in degree.  Relations
// are oriented largest-word-first; insertion keeps the leading words mutually
// irreducible (a newly dominated rule is displaced and re-oriented), and
// complete() resolves all overlap ambiguities whose overlap word fits inside
// the degree bound.  On that range normal forms are then unique.
// ---------------------------------------------------------------------------

class RewriteSystem {
public:
    explicit RewriteSystem(int degree_bound, long max_rules = 4000)
        : bound_(degree_bound), max_rules_(max_rules) {}

    int degree_bound() const { return bound_; }
    long rule_count() const { return long(rules_.size()); }

    const std::map<Word, NCPoly>& rules() const { return rules_; }

    // Reduce to normal form.  Throws if any encountered word exceeds the
    // degree bound (rewriting itself never raises the degree).
    NCPoly reduce(const NCPoly& p) const {
        NCPoly work = p, out;
        while (!work.is_zero()) {
            const auto& [w, c] = work.leading();
            if (long(w.size()) > bound_)
                throw std::domain_error("RewriteSystem: word exceeds degree bound " +
                                        std::to_string(bound_));
            Word lead = w;
            Coefficient coef = c;
            work.add_term(lead, -coef);
            bool hit = false;
            for (size_t len = 2; len <= lead.size() && !hit; ++len)
                for (size_t at = 0; at + len <= lead.size() && !hit; ++at) {
                    auto it = rules_.find(Word(lead.begin() + long(at),
                                               lead.begin() + long(at + len)));
                    if (it == rules_.end()) continue;
                    hit = true;
                    Word pre(lead.begin(), lead.begin() + long(at));
                    Word post(lead.begin() + long(at + len), lead.end());
                    for (const auto& [rw, rc] : it->second.terms()) {
                        Word nw = pre;
                        nw.insert(nw.end(), rw.begin(), rw.end());
                        nw.insert(nw.end(), post.begin(), post.end());
                        work.add_term(std::move(nw), coef * rc);
                    }
                }
            if (!hit) out.add_term(std::move(lead), coef);
        }
        return out;
    }

    // Insert a relation p = 0 (and anything it displaces).
    void add_relation(const NCPoly& p) {
        pending_.push_back(p);
        drain();
    }

    // Resolve overlap ambiguities until no new rule appears.
    void complete() {
        while (!fresh_.empty()) {
            Word u = std::move(fresh_.front());
            fresh_.pop_front();
            if (!rules_.count(u)) continue;  // displaced in the meantime
            std::vector<Word> others;
            others.reserve(rules_.size());
            for (const auto& [v, rep] : rules_) others.push_back(v);
            for (const auto& v : others) {
                if (!rules_.count(u)) break;
                overlap_spolys(u, v);
                if (!(u == v)) overlap_spolys(v, u);
            }
        }
        completed_ = true;
    }

    bool completed() const { return completed_; }

private:
    int bound_;
    long max_rules_;
    bool completed_ = false;
    std::map<Word, NCPoly> rules_;  // lead -> replacement (deglex-smaller)
    std::deque<NCPoly> pending_;
    std::deque<Word> fresh_;

    static bool contains(const Word& hay, const Word& needle) {
        if (needle.size() > hay.size()) return false;
        for (size_t at = 0; at + needle.size() <= hay.size(); ++at)
            if (std::equal(needle.begin(), needle.end(), hay.begin() + long(at)))
                return true;
        return false;
    }

    void drain() {
        while (!pending_.empty()) {
            NCPoly p = reduce(pending_.front());
            pending_.pop_front();
            if (p.is_zero()) continue;
            const auto& [w, c] = p.leading();
            if (w.empty())
                throw std::runtime_error(
                    "RewriteSystem: relations force a nonzero scalar to vanish");
            Word lead = w;
            NCPoly repl;
            Coefficient inv = Coefficient::one() / c;
            for (const auto& [rw, rc] : p.terms())
                if (!(rw == lead)) repl.add_term(rw, -(rc * inv));
            // displace any existing rule whose lead became reducible
            for (auto it = rules_.begin(); it != rules_.end();) {
                if (it->first.size() > lead.size() && contains(it->first, lead)) {
                    NCPoly back;
                    back.add_term(it->first, Coefficient::one());
                    back -= it->second;
                    pending_.push_back(std::move(back));
                    it = rules_.erase(it);
                } else {
                    ++it;
                }
            }
            rules_.emplace(lead, std::move(repl));
            fresh_.push_back(lead);
            completed_ = false;
            if (long(rules_.size()) > max_rules_)
                throw std::runtime_error("RewriteSystem: rule budget exceeded");
        }
    }

    // S-polynomials of the overlaps  u = a x,  v = x b  (suffix of u matches
    // prefix of v), one per overlap length.  drain() can displace rules, so
    // both participants are re-looked-up on every pass.
    void overlap_spolys(const Word& u, const Word& v) {
        size_t maxs = std::min(u.size(), v.size()) - 1;
        for (size_t s = 1; s <= maxs; ++s) {
            auto itu = rules_.find(u);
            auto itv = rules_.find(v);
            if (itu == rules_.end() || itv == rules_.end()) return;
            if (u.size() + v.size() - s > size_t(bound_)) continue;
            if (!std::equal(v.begin(), v.begin() + long(s), u.end() - long(s))) continue;
            NCPoly tail, head;
            tail.add_term(Word(v.begin() + long(s), v.end()), Coefficient::one());
            head.add_term(Word(u.begin(), u.end() - long(s)), Coefficient::one());
            NCPoly sp = itu->second * tail - head * itv->second;
            pending_.push_back(std::move(sp));
            drain();
        }
    }
};

}  // namespace qfa
