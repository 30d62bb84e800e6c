#include "cegarnn/nnet.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cegarnn {

namespace {

struct Line {
    std::size_t number;
    std::vector<double> values;
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line)
{
    std::string buf(token);
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw ParseError(line, "non-numeric token '" + buf + "'");
    if (errno == ERANGE || !std::isfinite(v))
        throw ParseError(line, "value out of range '" + buf + "'");
    return v;
}

/// Splits the text into numeric lines, skipping `//` comments and blank lines.
std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        ++number;
        auto raw = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (raw.empty() || raw.starts_with("//"))
            continue;
        Line line{number, {}};
        std::size_t start = 0;
        while (start <= raw.size()) {
            auto comma = raw.find(',', start);
            if (comma == std::string_view::npos)
                comma = raw.size();
            auto token = trim(raw.substr(start, comma - start));
            if (!token.empty())
                line.values.push_back(parse_number(token, number));
            else if (comma != raw.size())
                throw ParseError(number, "empty field");
            start = comma + 1;
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

class LineCursor {
public:
    explicit LineCursor(std::vector<Line> lines)
        : _lines(std::move(lines))
    {
    }

    const Line &next(const char *what)
    {
        if (_index >= _lines.size())
            throw ParseError(_lines.empty() ? 1 : _lines.back().number, std::string("unexpected end of file, expected ") + what);
        return _lines[_index++];
    }

    bool done() const { return _index >= _lines.size(); }
    const Line &peek() const { return _lines[_index]; }

private:
    std::vector<Line> _lines;
    std::size_t _index = 0;
};

std::size_t as_count(double v, std::size_t line, const char *what)
{
    if (v < 1 || v != std::floor(v) || v > 1e7)
        throw ParseError(line, std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> expect_values(const Line &line, std::size_t count, const char *what)
{
    if (line.values.size() != count)
        throw ParseError(line.number, std::string(what) + ": expected " + std::to_string(count) + " values, found " +
                                          std::to_string(line.values.size()));
    return line.values;
}

} // namespace

NNetModel parse_nnet(std::string_view text)
{
    LineCursor cursor(tokenize(text));

    const Line &header = cursor.next("header");
    if (header.values.size() != 4)
        throw ParseError(header.number, "header must list numLayers, inputSize, outputSize, maxLayerSize");
    const std::size_t num_layers = as_count(header.values[0], header.number, "numLayers");
    const std::size_t input_size = as_count(header.values[1], header.number, "inputSize");
    const std::size_t output_size = as_count(header.values[2], header.number, "outputSize");
    const std::size_t max_size = as_count(header.values[3], header.number, "maxLayerSize");

    const Line &sizes_line = cursor.next("layer sizes");
    if (sizes_line.values.size() != num_layers + 1)
        throw ParseError(sizes_line.number, "numLayers is " + std::to_string(num_layers) + ", so " +
                                                std::to_string(num_layers + 1) + " layer sizes are expected but " +
                                                std::to_string(sizes_line.values.size()) + " are listed");
    std::vector<std::size_t> sizes;
    for (double v : sizes_line.values)
        sizes.push_back(as_count(v, sizes_line.number, "layer size"));
    if (sizes.front() != input_size || sizes.back() != output_size)
        throw ParseError(sizes_line.number, "layer sizes disagree with inputSize/outputSize");
    if (*std::max_element(sizes.begin(), sizes.end()) != max_size)
        throw ParseError(sizes_line.number, "maxLayerSize disagrees with the layer sizes");

    cursor.next("symmetric flag");

    Normalization norm;
    norm.input_mins = expect_values(cursor.next("input minimums"), input_size, "input minimums");
    norm.input_maxes = expect_values(cursor.next("input maximums"), input_size, "input maximums");
    norm.means = expect_values(cursor.next("means"), input_size + 1, "means");
    norm.ranges = expect_values(cursor.next("ranges"), input_size + 1, "ranges");

    NetworkData data;
    data.layer_sizes = sizes;
    data.weights.emplace_back();
    data.biases.emplace_back();
    for (std::size_t layer = 1; layer < sizes.size(); ++layer) {
        Matrix w(sizes[layer], sizes[layer - 1]);
        for (std::size_t r = 0; r < sizes[layer]; ++r) {
            const Line &line = cursor.next("weight row");
            auto row = expect_values(line, sizes[layer - 1], "weight row");
            std::copy(row.begin(), row.end(), w.row(r).begin());
        }
        std::vector<double> bias;
        while (bias.size() < sizes[layer]) {
            const Line &line = cursor.next("bias value");
            if (bias.size() + line.values.size() > sizes[layer])
                throw ParseError(line.number, "too many bias values for layer " + std::to_string(layer));
            bias.insert(bias.end(), line.values.begin(), line.values.end());
        }
        data.weights.push_back(std::move(w));
        data.biases.push_back(std::move(bias));
    }
    if (!cursor.done())
        throw ParseError(cursor.peek().number, "unexpected trailing data");

    try {
        return NNetModel{Network(std::move(data)), std::move(norm)};
    } catch (const ShapeError &e) {
        throw ParseError(header.number, e.what());
    }
}

NNetModel parse_nnet(std::istream &in)
{
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_nnet(buf.str());
}

NNetModel load_nnet(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(path + ": cannot open network file");
    try {
        return parse_nnet(in);
    } catch (const ParseError &e) {
        throw ParseError(e.line(), e.detail(), path);
    }
}

namespace {

void write_values(std::ostream &out, const std::vector<double> &values)
{
    for (double v : values)
        out << v << ',';
    out << '\n';
}

} // namespace

std::string serialize_nnet(const Network &net, const Normalization &normalization)
{
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    const auto &sizes = net.layer_sizes();
    out << "// Feedforward ReLU network\n";
    out << sizes.size() - 1 << ',' << net.input_size() << ',' << net.output_size() << ','
        << *std::max_element(sizes.begin(), sizes.end()) << ",\n";
    for (std::size_t s : sizes)
        out << s << ',';
    out << '\n';
    out << "0,\n";

    const Normalization norm =
        normalization.input_mins.size() == net.input_size() ? normalization : identity_normalization(net);
    write_values(out, norm.input_mins);
    write_values(out, norm.input_maxes);
    write_values(out, norm.means);
    write_values(out, norm.ranges);

    for (std::size_t layer = 1; layer < net.num_layers(); ++layer) {
        const Matrix &w = net.weights(layer);
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (double v : w.row(r))
                out << v << ',';
            out << '\n';
        }
        for (double b : net.bias(layer))
            out << b << ",\n";
    }
    return out.str();
}

Normalization identity_normalization(const Network &net)
{
    Normalization norm;
    norm.input_mins.assign(net.input_size(), -1e9);
    norm.input_maxes.assign(net.input_size(), 1e9);
    norm.means.assign(net.input_size() + 1, 0.0);
    norm.ranges.assign(net.input_size() + 1, 1.0);
    return norm;
}

Network apply_normalization(const NNetModel &model)
{
    const Network &net = model.network;
    const Normalization &norm = model.normalization;
    const std::size_t in = net.input_size();
    if (norm.means.size() != in + 1 || norm.ranges.size() != in + 1)
        throw ShapeError("normalization constants do not match the network input size");
    for (double r : norm.ranges)
        if (r == 0.0)
            throw ShapeError("normalization range of zero");

    NetworkData d = net.data();
    Matrix &first = d.weights[1];
    for (std::size_t j = 0; j < first.rows(); ++j) {
        for (std::size_t k = 0; k < in; ++k) {
            const double scaled = first(j, k) / norm.ranges[k];
            d.biases[1][j] -= scaled * norm.means[k];
            first(j, k) = scaled;
        }
    }
    const std::size_t last = d.weights.size() - 1;
    const double out_range = norm.ranges[in];
    const double out_mean = norm.means[in];
    Matrix &final = d.weights[last];
    for (std::size_t j = 0; j < final.rows(); ++j) {
        for (auto &v : final.row(j))
            v *= out_range;
        d.biases[last][j] = d.biases[last][j] * out_range + out_mean;
    }
    return Network(std::move(d));
}

} // namespace cegarnn
