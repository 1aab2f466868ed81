#include "nocsit/entropy_cone.hpp"

#include "nocsit/errors.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace nocsit::entropy {

void write_certificate(std::ostream& out, const ProofCertificate& cert) {
    const VarSet& vars = cert.target.vars();
    out << "n " << vars.size() << " target";
    for (Mask s = 1; s <= vars.full(); ++s) {
        out << ' ' << to_string(cert.target.coefficient(s));
    }
    out << '\n';
    // std::map iterates in ascending id order.
    for (const auto& [id, y] : cert.multipliers) {
        out << id << ' ' << to_string(y, true) << '\n';
    }
}

ProofCertificate read_certificate(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("certificate: missing header line");
    }
    std::istringstream header(line);
    std::string tag;
    int n = 0;
    if (!(header >> tag) || tag != "n" || !(header >> n) || !(header >> tag) || tag != "target") {
        throw FormatError("certificate: header must read 'n <n> target <coeffs...>'");
    }
    const VarSet vars(n);
    LinearInequality target(vars);
    std::string tok;
    Mask s = 1;
    while (header >> tok) {
        if (s > vars.full()) {
            throw FormatError("certificate: too many target coefficients");
        }
        target.add(s++, parse_rational(tok));
    }
    if (s != vars.full() + 1) {
        throw FormatError("certificate: expected " + std::to_string(vars.subset_count()) +
                          " target coefficients");
    }

    ProofCertificate cert{target, {}, 0, false};
    int last_id = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        int id = 0;
        std::string value;
        std::string extra;
        if (!(row >> id >> value) || (row >> extra)) {
            throw FormatError("certificate: malformed multiplier line '" + line + "'");
        }
        if (id <= last_id) {
            throw FormatError("certificate: elemental ids must be strictly ascending");
        }
        last_id = id;
        const Rational y = parse_rational(value);
        if (y < 0) {
            throw FormatError("certificate: negative multiplier on elemental " + std::to_string(id));
        }
        cert.multipliers.emplace(id, y);
    }
    if (!certificate_is_valid(cert)) {
        throw InternalConsistencyError("certificate does not replay to its target inequality");
    }
    return cert;
}

} // namespace nocsit::entropy
