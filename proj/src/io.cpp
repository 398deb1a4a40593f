#include "purity/io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "purity/errors.hpp"
#include "purity/matrix.hpp"

namespace purity {

namespace {

// Whitespace-separated token scanner with '#'-to-end-of-line comments and
// line tracking for error messages.
class TokenReader {
public:
    TokenReader(std::string text, std::string path)
        : text_(std::move(text)), path_(std::move(path)) {}

    int line() const { return line_; }

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    std::string next(const char* what) {
        skip();
        if (pos_ >= text_.size())
            throw ParseError(line_, path_ + ": expected " + what + ", found end of file");
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '#')
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    double next_double(const char* what) {
        int at = 0;
        std::string tok = next_at(what, at);
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(at, path_ + ": expected " + what + ", found '" + tok + "'");
        return v;
    }

    long long next_integer(const char* what) {
        int at = 0;
        std::string tok = next_at(what, at);
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(tok.c_str(), &end, 10);
        if (end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(at, path_ + ": expected " + what + ", found '" + tok + "'");
        return v;
    }

    void expect_end() {
        if (!at_end())
            throw ParseError(line_, path_ + ": unexpected trailing content");
    }

    const std::string& path() const { return path_; }

private:
    std::string next_at(const char* what, int& at) {
        skip();
        at = line_;
        return next(what);
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                if (c == '\n') ++line_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string text_;
    std::string path_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TokenReader open_reader(const std::string& path) { return TokenReader(slurp(path), path); }

CMat read_matrix(TokenReader& r, int dim) {
    CMat m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double re = r.next_double("matrix entry (real part)");
            double im = r.next_double("matrix entry (imaginary part)");
            m(i, j) = cplx(re, im);
        }
    return m;
}

// strict CSV line splitter: exactly `fields` comma-separated doubles
std::vector<double> parse_csv_row(const std::string& ln, int fields, int line_no,
                                  const std::string& path) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = ln.find(',', pos);
        std::string tok = ln.substr(pos, comma == std::string::npos ? comma : comma - pos);
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(line_no, path + ": bad numeric field '" + tok + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (static_cast<int>(out.size()) != fields)
        throw ParseError(line_no, path + ": expected " + std::to_string(fields) +
                                      " fields, found " + std::to_string(out.size()));
    return out;
}

std::vector<std::vector<double>> load_csv(const std::string& path, const std::string& header,
                                          int fields) {
    std::string text = slurp(path);
    std::istringstream in(text);
    std::string ln;
    int line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, ln)) {
        ++line_no;
        if (!ln.empty() && ln.back() == '\r') ln.pop_back();
        if (line_no == 1) {
            if (ln != header)
                throw ParseError(1, path + ": expected header '" + header + "', found '" + ln +
                                        "'");
            continue;
        }
        if (ln.empty()) continue;
        rows.push_back(parse_csv_row(ln, fields, line_no, path));
    }
    if (line_no == 0) throw ParseError(0, path + ": empty file, expected header '" + header + "'");
    return rows;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error(tmp + ": write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error(path + ": rename failed: " + ec.message());
}

DensityMatrix load_density(const std::string& path) {
    TokenReader r = open_reader(path);
    long long dim = r.next_integer("dimension");
    if (dim < 1 || dim > 1024)
        throw ParseError(r.line(), path + ": dimension must lie in [1, 1024], got " +
                                       std::to_string(dim));
    CMat m = read_matrix(r, static_cast<int>(dim));
    r.expect_end();
    try {
        return DensityMatrix(std::move(m));
    } catch (const ValidationError& e) {
        throw ParseError(r.line(), path + ": " + e.what());
    }
}

void save_density(const std::string& path, const DensityMatrix& rho) {
    std::ostringstream out;
    int d = rho.dim();
    out << d << "\n";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            cplx v = rho.matrix()(i, j);
            out << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
        }
    atomic_write(path, out.str());
}

CQEnsemble load_ensemble(const std::string& path) {
    TokenReader r = open_reader(path);
    long long nx = r.next_integer("label count |X|");
    long long db = r.next_integer("system dimension d_B");
    if (nx < 1 || nx > 4096)
        throw ParseError(r.line(), path + ": |X| must lie in [1, 4096], got " +
                                       std::to_string(nx));
    if (db < 1 || db > 1024)
        throw ParseError(r.line(), path + ": d_B must lie in [1, 1024], got " +
                                       std::to_string(db));
    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    for (long long x = 0; x < nx; ++x) {
        probs.push_back(r.next_double("label probability"));
        CMat m = read_matrix(r, static_cast<int>(db));
        try {
            states.emplace_back(std::move(m));
        } catch (const ValidationError& e) {
            throw ParseError(r.line(), path + ": state " + std::to_string(x) + ": " + e.what());
        }
    }
    r.expect_end();
    try {
        return CQEnsemble(ProbabilityDistribution(std::move(probs)), std::move(states));
    } catch (const ValidationError& e) {
        throw ParseError(r.line(), path + ": " + e.what());
    }
}

void save_ensemble(const std::string& path, const CQEnsemble& ens) {
    std::ostringstream out;
    int nx = ens.alphabet_size(), d = ens.dim_b();
    out << nx << " " << d << "\n";
    for (int x = 0; x < nx; ++x) {
        out << format_double(ens.probs().probs()[x]);
        const CMat& m = ens.state(x).matrix();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out << " " << format_double(m(i, j).real()) << " "
                    << format_double(m(i, j).imag());
        out << "\n";
    }
    atomic_write(path, out.str());
}

ClassicalChannel load_channel(const std::string& path) {
    TokenReader r = open_reader(path);
    long long nx = r.next_integer("input alphabet size |X|");
    long long ny = r.next_integer("output alphabet size |Y|");
    if (nx < 1 || nx > 4096 || ny < 1 || ny > 4096)
        throw ParseError(r.line(), path + ": alphabet sizes must lie in [1, 4096]");
    std::vector<double> w(static_cast<std::size_t>(nx) * ny);
    for (auto& v : w) v = r.next_double("transition probability");
    r.expect_end();
    try {
        return ClassicalChannel(static_cast<int>(nx), static_cast<int>(ny), std::move(w));
    } catch (const ValidationError& e) {
        throw ParseError(r.line(), path + ": " + e.what());
    }
}

void save_channel(const std::string& path, const ClassicalChannel& w) {
    std::ostringstream out;
    out << w.in_size() << " " << w.out_size() << "\n";
    for (int x = 0; x < w.in_size(); ++x) {
        for (int y = 0; y < w.out_size(); ++y)
            out << (y ? " " : "") << format_double(w(y, x));
        out << "\n";
    }
    atomic_write(path, out.str());
}

void write_points_csv(const std::string& path, const std::vector<CurveRow>& rows) {
    std::ostringstream out;
    out << "mu,R_bits,P_bits\n";
    for (const CurveRow& r : rows)
        out << format_double(r.mu) << "," << format_double(r.r) << "," << format_double(r.p)
            << "\n";
    atomic_write(path, out.str());
}

std::vector<CurveRow> load_points_csv(const std::string& path) {
    std::vector<CurveRow> rows;
    for (const auto& f : load_csv(path, "mu,R_bits,P_bits", 3))
        rows.push_back({f[0], f[1], f[2]});
    return rows;
}

void write_envelope_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& vertices) {
    std::ostringstream out;
    out << "R_bits,P_env_bits\n";
    for (const auto& v : vertices)
        out << format_double(v.first) << "," << format_double(v.second) << "\n";
    atomic_write(path, out.str());
}

std::vector<std::pair<double, double>> load_envelope_csv(const std::string& path) {
    std::vector<std::pair<double, double>> rows;
    for (const auto& f : load_csv(path, "R_bits,P_env_bits", 2)) rows.emplace_back(f[0], f[1]);
    return rows;
}

std::string format_ledger(const ResourceLedger& led) {
    std::ostringstream out;
    out << "n=" << led.n << "\n";
    out << "delta=" << format_double(led.delta) << "\n";
    out << "rate_M=" << format_double(led.rate_M) << "\n";
    out << "rate_L=" << format_double(led.rate_L) << "\n";
    out << "catalyst_rate=" << format_double(led.catalyst_rate) << "\n";
    out << "P_A_rate=" << format_double(led.P_A_rate) << "\n";
    out << "P_B_rate=" << format_double(led.P_B_rate) << "\n";
    out << "net_P=" << format_double(led.net_P) << "\n";
    out << "classical_R=" << format_double(led.classical_R) << "\n";
    return out.str();
}

void write_ledger(const std::string& path, const ResourceLedger& led) {
    atomic_write(path, format_ledger(led));
}

ResourceLedger load_ledger(const std::string& path) {
    std::string text = slurp(path);
    std::istringstream in(text);
    std::string ln;
    static const char* keys[] = {"n",        "delta",    "rate_M", "rate_L", "catalyst_rate",
                                 "P_A_rate", "P_B_rate", "net_P",  "classical_R"};
    double vals[9];
    int line_no = 0;
    for (int k = 0; k < 9; ++k) {
        if (!std::getline(in, ln))
            throw ParseError(line_no, path + ": missing key '" + std::string(keys[k]) + "'");
        ++line_no;
        if (!ln.empty() && ln.back() == '\r') ln.pop_back();
        std::string prefix = std::string(keys[k]) + "=";
        if (ln.rfind(prefix, 0) != 0)
            throw ParseError(line_no, path + ": expected '" + prefix + "...', found '" + ln + "'");
        std::string tok = ln.substr(prefix.size());
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(line_no, path + ": bad value '" + tok + "'");
        vals[k] = v;
    }
    ResourceLedger led;
    led.n = static_cast<long long>(vals[0]);
    if (led.n < 1 || static_cast<double>(led.n) != vals[0])
        throw ParseError(1, path + ": n must be a positive integer");
    led.delta = vals[1];
    led.rate_M = vals[2];
    led.rate_L = vals[3];
    led.catalyst_rate = vals[4];
    led.P_A_rate = vals[5];
    led.P_B_rate = vals[6];
    led.net_P = vals[7];
    led.classical_R = vals[8];
    return led;
}

} // namespace purity
