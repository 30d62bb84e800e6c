#include "cegarnn/property.hpp"

#include "cegarnn/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace cegarnn {

double LinearConstraint::evaluate(std::span<const double> x) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size() && k < x.size(); ++k)
        sum += coeffs[k] * x[k];
    return sum;
}

bool Query::box_empty() const
{
    for (std::size_t k = 0; k < lower.size(); ++k)
        if (lower[k] > upper[k])
            return true;
    return false;
}

bool Query::satisfies_input(std::span<const double> x, double slack) const
{
    if (x.size() != lower.size())
        return false;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] < lower[k] - slack || x[k] > upper[k] + slack)
            return false;
    for (const auto &c : constraints)
        if (c.evaluate(x) > c.rhs + slack)
            return false;
    return true;
}

void Query::validate(std::size_t input_size) const
{
    if (lower.size() != input_size || upper.size() != input_size)
        throw ShapeError("query box has " + std::to_string(lower.size()) + " inputs, network has " +
                         std::to_string(input_size));
    for (std::size_t k = 0; k < input_size; ++k)
        if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]))
            throw InvalidQueryError("input x" + std::to_string(k) + " unbounded");
    for (const auto &c : constraints)
        if (c.coeffs.size() != input_size)
            throw ShapeError("linear constraint has the wrong number of coefficients");
    if (!std::isfinite(threshold) || !(eps_strict >= 0.0))
        throw InvalidQueryError("threshold and eps_strict must be finite");
}

double OutputAtom::evaluate(std::span<const double> outputs) const
{
    double sum = constant;
    for (const auto &[index, coeff] : terms)
        sum += coeff * outputs[index];
    return sum;
}

namespace {

enum class TokenKind { Number, Variable, Plus, Minus, Star, Less, LessEq, Greater, GreaterEq, Or, End };

struct Token {
    TokenKind kind;
    double number = 0.0;
    char var_kind = 0;
    std::size_t var_index = 0;
    std::string text;
};

class Lexer {
public:
    Lexer(std::string_view line, std::size_t line_number)
        : _line(line)
        , _number(line_number)
    {
    }

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (_pos >= _line.size()) {
                out.push_back({TokenKind::End, 0.0, 0, 0, {}});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_space()
    {
        while (_pos < _line.size() && std::isspace(static_cast<unsigned char>(_line[_pos])))
            ++_pos;
    }

    Token next()
    {
        const char c = _line[_pos];
        auto two = _line.substr(_pos, 2);
        if (two == "<=") {
            _pos += 2;
            return {TokenKind::LessEq, 0, 0, 0, "<="};
        }
        if (two == ">=") {
            _pos += 2;
            return {TokenKind::GreaterEq, 0, 0, 0, ">="};
        }
        if (two == "||") {
            _pos += 2;
            return {TokenKind::Or, 0, 0, 0, "||"};
        }
        switch (c) {
        case '+': ++_pos; return {TokenKind::Plus, 0, 0, 0, "+"};
        case '-': ++_pos; return {TokenKind::Minus, 0, 0, 0, "-"};
        case '*': ++_pos; return {TokenKind::Star, 0, 0, 0, "*"};
        case '<': ++_pos; return {TokenKind::Less, 0, 0, 0, "<"};
        case '>': ++_pos; return {TokenKind::Greater, 0, 0, 0, ">"};
        default: break;
        }
        if (c == 'x' || c == 'y') {
            std::size_t end = _pos + 1;
            while (end < _line.size() && std::isdigit(static_cast<unsigned char>(_line[end])))
                ++end;
            const auto name = std::string(_line.substr(_pos, end - _pos));
            if (end == _pos + 1 || (end < _line.size() && std::isalpha(static_cast<unsigned char>(_line[end]))))
                throw PropertyError(_number, "unknown variable '" + word_at(_pos) + "'");
            Token t{TokenKind::Variable, 0, c, std::stoul(name.substr(1)), name};
            _pos = end;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string buf(_line.substr(_pos));
            // strtod would accept hexadecimal floats; "0x1" is not valid here.
            if (buf.size() > 1 && buf[0] == '0' && (buf[1] == 'x' || buf[1] == 'X'))
                buf.resize(1);
            char *end = nullptr;
            const double v = std::strtod(buf.c_str(), &end);
            const std::size_t used = static_cast<std::size_t>(end - buf.c_str());
            const std::size_t after = _pos + used;
            if (used == 0 || !std::isfinite(v) ||
                (after < _line.size() && std::isalpha(static_cast<unsigned char>(_line[after]))))
                throw PropertyError(_number, "malformed number");
            Token t{TokenKind::Number, v, 0, 0, buf.substr(0, used)};
            _pos += used;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)))
            throw PropertyError(_number, "unknown variable '" + word_at(_pos) + "'");
        throw PropertyError(_number, std::string("unexpected character '") + c + "'");
    }

    std::string word_at(std::size_t pos) const
    {
        std::size_t end = pos;
        while (end < _line.size() && (std::isalnum(static_cast<unsigned char>(_line[end])) || _line[end] == '_'))
            ++end;
        return std::string(_line.substr(pos, end - pos));
    }

    std::string_view _line;
    std::size_t _number;
    std::size_t _pos = 0;
};

/// sum coeffs[(kind, index)] * var + constant
struct LinearExpr {
    std::map<std::pair<char, std::size_t>, double> coeffs;
    double constant = 0.0;

    void add(const LinearExpr &other, double scale)
    {
        for (const auto &[var, c] : other.coeffs)
            coeffs[var] += scale * c;
        constant += scale * other.constant;
    }
};

class ExprParser {
public:
    ExprParser(const std::vector<Token> &tokens, std::size_t line)
        : _tokens(tokens)
        , _line(line)
    {
    }

    const Token &peek() const { return _tokens[_pos]; }
    const Token &take() { return _tokens[_pos++]; }

    LinearExpr expression()
    {
        LinearExpr expr;
        double sign = 1.0;
        if (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus)
            sign = take().kind == TokenKind::Minus ? -1.0 : 1.0;
        expr.add(term(), sign);
        while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            sign = take().kind == TokenKind::Minus ? -1.0 : 1.0;
            if (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus)
                sign *= take().kind == TokenKind::Minus ? -1.0 : 1.0;
            expr.add(term(), sign);
        }
        return expr;
    }

private:
    LinearExpr term()
    {
        LinearExpr t;
        const Token &tok = take();
        if (tok.kind == TokenKind::Number) {
            if (peek().kind == TokenKind::Star)
                take();
            if (peek().kind == TokenKind::Variable) {
                const Token &var = take();
                t.coeffs[{var.var_kind, var.var_index}] = tok.number;
            } else {
                t.constant = tok.number;
            }
            return t;
        }
        if (tok.kind == TokenKind::Variable) {
            double coeff = 1.0;
            if (peek().kind == TokenKind::Star) {
                take();
                const Token &num = take();
                if (num.kind != TokenKind::Number)
                    throw PropertyError(_line, "expected a number after '*'");
                coeff = num.number;
            }
            t.coeffs[{tok.var_kind, tok.var_index}] = coeff;
            return t;
        }
        throw PropertyError(_line, "expected a number or variable, found " +
                                       (tok.kind == TokenKind::End ? std::string("end of line") : "'" + tok.text + "'"));
    }

    const std::vector<Token> &_tokens;
    std::size_t _line;
    std::size_t _pos = 0;
};

struct Comparison {
    LinearExpr expr; // expr (op) 0
    TokenKind op;
};

bool is_comparison(TokenKind k)
{
    return k == TokenKind::Less || k == TokenKind::LessEq || k == TokenKind::Greater || k == TokenKind::GreaterEq;
}

Comparison parse_comparison(ExprParser &parser, std::size_t line)
{
    LinearExpr lhs = parser.expression();
    const Token &op = parser.take();
    if (!is_comparison(op.kind))
        throw PropertyError(line, "expected a comparison operator (<=, >=, >)");
    if (op.kind == TokenKind::Less)
        throw PropertyError(line, "operator '<' is not supported; use <= or >");
    LinearExpr rhs = parser.expression();
    lhs.add(rhs, -1.0);
    return {std::move(lhs), op.kind};
}

char variable_kind(const LinearExpr &expr, std::size_t line)
{
    char kind = 0;
    for (const auto &[var, c] : expr.coeffs) {
        if (c == 0.0)
            continue;
        if (kind != 0 && kind != var.first)
            throw PropertyError(line, "a constraint may not mix input and output variables");
        kind = var.first;
    }
    if (kind == 0)
        throw PropertyError(line, "constraint mentions no variable");
    return kind;
}

OutputAtom to_atom(const Comparison &cmp)
{
    // Normalize to atom > 0 or atom >= 0.
    const double scale = (cmp.op == TokenKind::LessEq) ? -1.0 : 1.0;
    OutputAtom atom;
    for (const auto &[var, c] : cmp.expr.coeffs)
        if (c != 0.0)
            atom.terms.emplace_back(var.second, scale * c);
    atom.constant = scale * cmp.expr.constant;
    atom.strict = cmp.op == TokenKind::Greater;
    return atom;
}

} // namespace

RawProperty parse_property(std::string_view text, std::optional<std::size_t> num_inputs)
{
    struct InputRow {
        std::map<std::size_t, double> coeffs;
        double rhs; // sum coeffs * x <= rhs
        std::size_t line;
    };
    std::vector<InputRow> rows;
    std::vector<OutputAtom> disjuncts;
    std::size_t output_line = 0;
    std::size_t max_input = 0;
    bool any_input = false;

    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        ++line_number;
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;

        const auto tokens = Lexer(line, line_number).run();
        ExprParser parser(tokens, line_number);
        std::vector<Comparison> alternatives;
        alternatives.push_back(parse_comparison(parser, line_number));
        while (parser.peek().kind == TokenKind::Or) {
            parser.take();
            alternatives.push_back(parse_comparison(parser, line_number));
        }
        if (parser.peek().kind != TokenKind::End)
            throw PropertyError(line_number, "unexpected '" + parser.peek().text + "'");

        const char kind = variable_kind(alternatives.front().expr, line_number);
        if (kind == 'x') {
            if (alternatives.size() > 1)
                throw PropertyError(line_number, "disjunctions over inputs are not supported");
            const Comparison &cmp = alternatives.front();
            if (cmp.op == TokenKind::Greater)
                throw PropertyError(line_number, "strict inequalities over inputs are not supported");
            const double scale = cmp.op == TokenKind::LessEq ? 1.0 : -1.0;
            InputRow row{{}, -scale * cmp.expr.constant, line_number};
            for (const auto &[var, c] : cmp.expr.coeffs) {
                if (c == 0.0)
                    continue;
                row.coeffs[var.second] = scale * c;
                max_input = std::max(max_input, var.second);
                any_input = true;
            }
            rows.push_back(std::move(row));
            continue;
        }

        if (output_line != 0)
            throw PropertyError(line_number, "conjunctions of output constraints are not supported (first output "
                                             "constraint on line " +
                                                 std::to_string(output_line) +
                                                 "); write alternatives on one line separated by ||");
        output_line = line_number;
        for (const auto &cmp : alternatives) {
            if (variable_kind(cmp.expr, line_number) != 'y')
                throw PropertyError(line_number, "a constraint may not mix input and output variables");
            disjuncts.push_back(to_atom(cmp));
        }
    }

    if (disjuncts.empty())
        throw PropertyError(0, "property has no output constraint");

    const std::size_t n = num_inputs.value_or(any_input ? max_input + 1 : 0);
    if (n == 0)
        throw PropertyError(0, "property constrains no input");

    RawProperty prop;
    prop.lower.assign(n, -std::numeric_limits<double>::infinity());
    prop.upper.assign(n, std::numeric_limits<double>::infinity());
    for (const auto &row : rows) {
        for (const auto &[index, c] : row.coeffs)
            if (index >= n)
                throw PropertyError(row.line, "unknown variable 'x" + std::to_string(index) + "' (network has " +
                                                  std::to_string(n) + " inputs)");
        if (row.coeffs.size() == 1) {
            const auto [index, c] = *row.coeffs.begin();
            const double bound = row.rhs / c;
            if (c > 0)
                prop.upper[index] = std::min(prop.upper[index], bound);
            else
                prop.lower[index] = std::max(prop.lower[index], bound);
            continue;
        }
        LinearConstraint lc;
        lc.coeffs.assign(n, 0.0);
        for (const auto &[index, c] : row.coeffs)
            lc.coeffs[index] = c;
        lc.rhs = row.rhs;
        prop.constraints.push_back(std::move(lc));
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(prop.lower[k]) || !std::isfinite(prop.upper[k]))
            throw PropertyError(0, "input x" + std::to_string(k) + " unbounded");

    prop.disjuncts = std::move(disjuncts);
    return prop;
}

RawProperty load_property(const std::string &path, std::optional<std::size_t> num_inputs)
{
    std::ifstream in(path);
    if (!in)
        throw Error(path + ": cannot open property file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_property(buf.str(), num_inputs);
    } catch (const PropertyError &e) {
        throw PropertyError(e.line(), e.detail(), path);
    }
}

EncodedQuery encode_output_property(const Network &net, const RawProperty &prop, double eps_strict)
{
    if (prop.disjuncts.empty())
        throw EncodingError("cannot encode an empty disjunction");
    if (prop.num_inputs() != net.input_size())
        throw EncodingError("property has " + std::to_string(prop.num_inputs()) + " inputs, network has " +
                            std::to_string(net.input_size()));
    for (const auto &atom : prop.disjuncts)
        for (const auto &[index, c] : atom.terms)
            if (index >= net.output_size())
                throw EncodingError("property mentions y" + std::to_string(index) + " but the network has " +
                                    std::to_string(net.output_size()) + " outputs");

    const NetworkData &src = net.data();
    const std::size_t last = src.layer_sizes.size() - 1;
    const std::size_t atoms = prop.disjuncts.size();
    const Matrix &out_w = src.weights[last];
    const auto &out_b = src.biases[last];

    // t_k = ReLU(l_k(W y_prev + b)): compose each atom with the affine output layer.
    Matrix t_w(atoms, out_w.cols());
    std::vector<double> t_b(atoms);
    for (std::size_t k = 0; k < atoms; ++k) {
        const OutputAtom &atom = prop.disjuncts[k];
        double bias = atom.constant + (atom.strict ? 0.0 : eps_strict);
        for (const auto &[index, c] : atom.terms) {
            for (std::size_t p = 0; p < out_w.cols(); ++p)
                t_w(k, p) += c * out_w(index, p);
            bias += c * out_b[index];
        }
        t_b[k] = bias;
    }

    NetworkData d;
    d.layer_sizes.assign(src.layer_sizes.begin(), src.layer_sizes.end() - 1);
    d.layer_sizes.push_back(atoms);
    d.layer_sizes.push_back(1);
    d.weights.assign(src.weights.begin(), src.weights.end() - 1);
    d.biases.assign(src.biases.begin(), src.biases.end() - 1);
    d.weights.push_back(std::move(t_w));
    d.biases.push_back(std::move(t_b));
    d.weights.emplace_back(1, atoms, 1.0);
    d.biases.emplace_back(1, 0.0);

    Query q;
    q.lower = prop.lower;
    q.upper = prop.upper;
    q.constraints = prop.constraints;
    q.threshold = 0.0;
    q.eps_strict = eps_strict;
    return {Network(std::move(d)), std::move(q)};
}

EncodedQuery generate_robustness_query(const Network &net, std::span<const double> x0, double delta,
                                       std::size_t better, std::size_t than, std::span<const double> declared_lower,
                                       std::span<const double> declared_upper, double eps_strict)
{
    if (better == than)
        throw InvalidQueryError("robustness query needs two distinct outputs");
    if (better >= net.output_size() || than >= net.output_size())
        throw InvalidQueryError("output index out of range");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw InvalidQueryError("delta must be positive");
    if (x0.size() != net.input_size())
        throw ShapeError("center point has the wrong number of inputs");
    const bool clip = !declared_lower.empty();
    if (clip && (declared_lower.size() != x0.size() || declared_upper.size() != x0.size()))
        throw ShapeError("declared input bounds have the wrong length");

    RawProperty prop;
    prop.lower.resize(x0.size());
    prop.upper.resize(x0.size());
    for (std::size_t k = 0; k < x0.size(); ++k) {
        if (clip && (x0[k] < declared_lower[k] || x0[k] > declared_upper[k]))
            throw InvalidQueryError("center point lies outside the declared input bounds at x" + std::to_string(k));
        prop.lower[k] = x0[k] - delta;
        prop.upper[k] = x0[k] + delta;
        if (clip) {
            prop.lower[k] = std::max(prop.lower[k], declared_lower[k]);
            prop.upper[k] = std::min(prop.upper[k], declared_upper[k]);
        }
    }
    OutputAtom atom;
    atom.terms = {{better, 1.0}, {than, -1.0}};
    atom.strict = false;
    prop.disjuncts.push_back(std::move(atom));
    return encode_output_property(net, prop, eps_strict);
}

namespace {

std::string number(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace

std::string format_property(const RawProperty &prop)
{
    std::string out;
    for (std::size_t k = 0; k < prop.num_inputs(); ++k) {
        out += "x" + std::to_string(k) + " >= " + number(prop.lower[k]) + "\n";
        out += "x" + std::to_string(k) + " <= " + number(prop.upper[k]) + "\n";
    }
    for (const auto &c : prop.constraints) {
        std::string line;
        for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
            if (c.coeffs[k] == 0.0)
                continue;
            if (!line.empty())
                line += " + ";
            line += number(c.coeffs[k]) + " x" + std::to_string(k);
        }
        if (line.empty())
            line = "0 x0";
        out += line + " <= " + number(c.rhs) + "\n";
    }
    for (std::size_t d = 0; d < prop.disjuncts.size(); ++d) {
        const OutputAtom &atom = prop.disjuncts[d];
        if (d > 0)
            out += " || ";
        std::string line;
        for (const auto &[index, coeff] : atom.terms) {
            if (!line.empty())
                line += " + ";
            line += number(coeff) + " y" + std::to_string(index);
        }
        if (line.empty())
            line = "0 y0";
        out += line + " " + (atom.strict ? ">" : ">=") + " " + number(-atom.constant);
    }
    if (!prop.disjuncts.empty())
        out += "\n";
    return out;
}

} // namespace cegarnn
