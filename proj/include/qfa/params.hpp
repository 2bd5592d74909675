#pragma once

#include "qfa/coeff.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace qfa {

// Parameters of the three fundamental representations.
//
// Validity of each representation by itself requires
//   alpha_i beta_i = -q^2 mu_i nu_i  and  sigma_i^2 = 1   (i = 1,2),
// plus invertibility of everything.  The stronger "compatible family"
// constraints (all four of kappa_1, kappa_2, sigma_1, sigma_2 equal to one
// sign sigma; kappa_31 = kappa_32 = rho with rho^2 = 1; alpha_i beta_i =
// -eps q^2 and mu_i nu_i = eps) are exactly what the intertwiner solvers
// need; they are asserted there, not here, so that the transposition check
// can exercise parameter sets that violate them.
struct ParameterSet {
    Coefficient mu1, nu1, alpha1, beta1, kappa1, sigma1;
    Coefficient mu2, nu2, alpha2, beta2, kappa2, sigma2;
    Coefficient mu3, alpha3, kappa31, kappa32;

    static ParameterSet canonical() {
        ParameterSet p;
        Coefficient one = Coefficient::one();
        p.mu1 = p.nu1 = p.mu2 = p.nu2 = one;
        p.alpha1 = p.alpha2 = one;
        p.beta1 = p.beta2 = -Coefficient::q_pow(2);
        p.kappa1 = p.kappa2 = p.sigma1 = p.sigma2 = one;
        p.mu3 = p.alpha3 = one;
        p.kappa31 = p.kappa32 = one;
        return p;
    }

    std::array<std::pair<const char*, const Coefficient*>, 16> named() const {
        return {{{"mu1", &mu1}, {"nu1", &nu1}, {"alpha1", &alpha1}, {"beta1", &beta1},
                 {"kappa1", &kappa1}, {"sigma1", &sigma1},
                 {"mu2", &mu2}, {"nu2", &nu2}, {"alpha2", &alpha2}, {"beta2", &beta2},
                 {"kappa2", &kappa2}, {"sigma2", &sigma2},
                 {"mu3", &mu3}, {"alpha3", &alpha3},
                 {"kappa31", &kappa31}, {"kappa32", &kappa32}}};
    }

    // Per-representation validity; throws with a description on violation.
    void validate() const {
        Coefficient mq2 = -Coefficient::q_pow(2);
        auto check_pair = [&](const Coefficient& a, const Coefficient& b,
                              const Coefficient& mu, const Coefficient& nu, int i) {
            if (a * b != mq2 * mu * nu)
                throw std::invalid_argument("parameters: alpha" + std::to_string(i) +
                                            "*beta" + std::to_string(i) +
                                            " != -q^2*mu*nu");
        };
        check_pair(alpha1, beta1, mu1, nu1, 1);
        check_pair(alpha2, beta2, mu2, nu2, 2);
        for (const Coefficient* s : {&sigma1, &sigma2})
            if (*s * *s != Coefficient::one())
                throw std::invalid_argument("parameters: sigma_i must square to 1");
        for (auto& [name, c] : named())
            if (c->is_zero())
                throw std::invalid_argument(std::string("parameters: ") + name +
                                            " must be invertible");
    }

    bool is_canonical() const {
        auto c = canonical();
        auto a = named(), b = c.named();
        for (size_t i = 0; i < a.size(); ++i)
            if (*a[i].second != *b[i].second) return false;
        return true;
    }

    // The three signs of a compatible family; throws if this set is not one.
    Coefficient sigma() const {
        if (kappa1 != kappa2 || kappa1 != sigma1 || kappa1 != sigma2)
            throw std::invalid_argument("parameters: kappa1=kappa2=sigma1=sigma2 required");
        return kappa1;
    }
    Coefficient rho() const {
        if (kappa31 != kappa32 || kappa31 * kappa31 != Coefficient::one())
            throw std::invalid_argument("parameters: kappa31=kappa32=+-1 required");
        return kappa31;
    }
    Coefficient epsilon() const {
        Coefficient e = mu1 * nu1;
        if (e * e != Coefficient::one() || mu2 * nu2 != e)
            throw std::invalid_argument("parameters: mu_i*nu_i must be a common sign");
        return e;
    }

    std::string serialize() const {
        std::string s;
        for (auto& [name, c] : named())
            s += std::string(name) + "=" + print_coefficient(*c) + "\n";
        return s;
    }

    static ParameterSet parse(const std::string& text) {
        ParameterSet p = canonical();
        std::istringstream in(text);
        std::string line;
        int seen = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("parameters: expected name=value, got '" + line + "'");
            std::string name = line.substr(0, eq);
            Coefficient val = parse_coefficient(line.substr(eq + 1));
            bool found = false;
            ParameterSet tmp;
            Coefficient* fields[] = {&p.mu1, &p.nu1, &p.alpha1, &p.beta1, &p.kappa1, &p.sigma1,
                                     &p.mu2, &p.nu2, &p.alpha2, &p.beta2, &p.kappa2, &p.sigma2,
                                     &p.mu3, &p.alpha3, &p.kappa31, &p.kappa32};
            auto names = p.named();
            for (size_t i = 0; i < names.size(); ++i)
                if (name == names[i].first) {
                    *fields[i] = val;
                    found = true;
                    break;
                }
            if (!found)
                throw std::invalid_argument("parameters: unknown name '" + name + "'");
            ++seen;
        }
        if (seen == 0) throw std::invalid_argument("parameters: empty file");
        p.validate();
        return p;
    }

    static ParameterSet load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("parameters: cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    // Stable identity used in cache paths and dump headers.
    std::string id_string() const {
        if (is_canonical()) return "canonical";
        uint64_t h = 14695981039346656037ULL;  // FNV-1a over the serialized form
        for (char ch : serialize()) {
            h ^= uint8_t(ch);
            h *= 1099511628211ULL;
        }
        char buf[32];
        snprintf(buf, sizeof buf, "custom-%016llx", (unsigned long long)h);
        return buf;
    }
};

}  // namespace qfa
