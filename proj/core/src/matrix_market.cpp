#include "dsm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dsm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Banner {
    std::string format;    // coordinate | array
    std::string field;     // real | ...
    std::string symmetry;  // symmetric | general | ...
};

Banner parse_banner(const std::string& line, const std::filesystem::path& path) {
    std::istringstream ss(line);
    std::string tag, object;
    Banner b;
    ss >> tag >> object >> b.format >> b.field >> b.symmetry;
    if (tag != "%%MatrixMarket")
        throw io_error(path.string() + ": missing MatrixMarket banner");
    if (lower(object) != "matrix")
        throw io_error(path.string() + ": unsupported MatrixMarket object '" + object + "'");
    b.format = lower(b.format);
    b.field = lower(b.field);
    b.symmetry = lower(b.symmetry);
    if (b.format != "coordinate" && b.format != "array")
        throw io_error(path.string() + ": unsupported format '" + b.format + "'");
    if (b.field != "real")
        throw io_error(path.string() + ": field must be 'real', got '" + b.field + "'");
    if (b.symmetry != "symmetric" && b.symmetry != "general")
        throw io_error(path.string() + ": symmetry must be 'symmetric' or 'general', got '" +
                       b.symmetry + "'");
    return b;
}

// Next content line: comments ('%') and blank lines skipped.
bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (line[i] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace

SymmetricOperator read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path.string() + ": cannot open file");

    std::string line;
    if (!std::getline(in, line)) throw io_error(path.string() + ": empty file");
    const Banner banner = parse_banner(line, path);

    if (!next_content_line(in, line)) throw io_error(path.string() + ": missing size line");
    std::istringstream size_line(line);

    if (banner.format == "coordinate") {
        long long rows = 0, cols = 0, nnz = -1;
        size_line >> rows >> cols >> nnz;
        if (!size_line || rows < 1 || cols < 1 || nnz < 0)
            throw io_error(path.string() + ": malformed coordinate size line");
        if (rows != cols)
            throw io_error(path.string() + ": matrix must be square, got " +
                           std::to_string(rows) + "x" + std::to_string(cols));
        const std::size_t n = static_cast<std::size_t>(rows);
        std::vector<double> e(n * n, 0.0);
        for (long long k = 0; k < nnz; ++k) {
            if (!next_content_line(in, line))
                throw io_error(path.string() + ": expected " + std::to_string(nnz) +
                               " entries, file ended early");
            std::istringstream es(line);
            long long i = 0, j = 0;
            double v = 0.0;
            es >> i >> j >> v;
            if (!es || i < 1 || j < 1 || i > rows || j > cols)
                throw io_error(path.string() + ": bad coordinate entry '" + line + "'");
            e[static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(j - 1)] = v;
            if (banner.symmetry == "symmetric")
                e[static_cast<std::size_t>(j - 1) * n + static_cast<std::size_t>(i - 1)] = v;
        }
        try {
            return SymmetricOperator(n, std::move(e));
        } catch (const std::invalid_argument& ex) {
            throw io_error(path.string() + ": " + ex.what());
        }
    }

    // array format
    long long rows = 0, cols = 0;
    size_line >> rows >> cols;
    if (!size_line || rows < 1 || cols < 1)
        throw io_error(path.string() + ": malformed array size line");
    if (rows != cols)
        throw io_error(path.string() + ": matrix must be square, got " + std::to_string(rows) +
                       "x" + std::to_string(cols));
    const std::size_t n = static_cast<std::size_t>(rows);

    auto next_value = [&](double& v) {
        if (!next_content_line(in, line))
            throw io_error(path.string() + ": array data ended early");
        std::istringstream vs(line);
        vs >> v;
        if (!vs) throw io_error(path.string() + ": bad array value '" + line + "'");
    };

    std::vector<double> e(n * n, 0.0);
    if (banner.symmetry == "symmetric") {
        // Lower triangle, column-major.
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j; i < n; ++i) {
                double v = 0.0;
                next_value(v);
                e[i * n + j] = v;
                e[j * n + i] = v;
            }
    } else {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                next_value(v);
                e[i * n + j] = v;
            }
    }
    try {
        return SymmetricOperator(n, std::move(e));
    } catch (const std::invalid_argument& ex) {
        throw io_error(path.string() + ": " + ex.what());
    }
}

void write_matrix_market(const SymmetricOperator& A, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error(path.string() + ": cannot open file for writing");
    const std::size_t n = A.n();

    std::size_t nnz = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (A(i, j) != 0.0) ++nnz;

    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n << " " << n << " " << nnz << "\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (A(i, j) != 0.0)
                out << (i + 1) << " " << (j + 1) << " " << format_double(A(i, j)) << "\n";
    if (!out) throw io_error(path.string() + ": write failed");
}

std::vector<double> read_vector(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path.string() + ": cannot open file");

    std::string line;
    if (!std::getline(in, line)) throw io_error(path.string() + ": empty file");

    if (line.rfind("%%MatrixMarket", 0) == 0) {
        const Banner banner = parse_banner(line, path);
        if (banner.format != "array" || banner.symmetry != "general")
            throw io_error(path.string() + ": vectors must be 'array real general'");
        if (!next_content_line(in, line)) throw io_error(path.string() + ": missing size line");
        std::istringstream ss(line);
        long long rows = 0, cols = 0;
        ss >> rows >> cols;
        if (!ss || rows < 1 || cols != 1)
            throw io_error(path.string() + ": vector file must be n-by-1");
        std::vector<double> v(static_cast<std::size_t>(rows));
        for (auto& x : v) {
            if (!next_content_line(in, line))
                throw io_error(path.string() + ": vector data ended early");
            std::istringstream vs(line);
            vs >> x;
            if (!vs) throw io_error(path.string() + ": bad vector value '" + line + "'");
        }
        return v;
    }

    // Plain text: one value per line, '#' comments.
    std::vector<double> v;
    auto consume = [&](const std::string& l) {
        const std::size_t i = l.find_first_not_of(" \t\r");
        if (i == std::string::npos || l[i] == '#') return;
        std::istringstream vs(l);
        double x = 0.0;
        vs >> x;
        if (!vs) throw io_error(path.string() + ": bad vector value '" + l + "'");
        v.push_back(x);
    };
    consume(line);
    while (std::getline(in, line)) consume(line);
    if (v.empty()) throw io_error(path.string() + ": no values found");
    return v;
}

void write_vector(std::span<const double> v, const std::filesystem::path& path,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw io_error(path.string() + ": cannot open file for writing");
    for (const auto& c : comments) out << "# " << c << "\n";
    for (double x : v) out << format_double(x) << "\n";
    if (!out) throw io_error(path.string() + ": write failed");
}

}  // namespace dsm
