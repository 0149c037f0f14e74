#include "text_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "oup/errors.hpp"

namespace oup::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool try_number(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

double parse_number(std::string_view text) {
  double value = 0.0;
  if (!try_number(trim(text), value)) {
    throw ParseError("'" + std::string(text) + "' is not a finite number");
  }
  return value;
}

Complex parse_complex(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (c != ' ' && c != '\t') compact.push_back(c);
  }
  const std::string_view s = compact;
  if (s.empty()) throw ParseError("empty complex number");
  if (s.back() != 'i') return {parse_number(s), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split_at = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const auto imag_part = [&](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_number(t);
  };
  if (split_at == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_number(body.substr(0, split_at)), imag_part(body.substr(split_at))};
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto field : split(text, ',')) out.push_back(parse_number(field));
  return out;
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  for (const auto field : split(text, ',')) out.push_back(parse_complex(field));
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

TimeSeriesSample parse_csv(std::istream& in, double tau, MeanPolicy policy) {
  std::vector<double> times;
  std::vector<double> values;
  std::size_t columns = 0;
  bool seen_content = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    std::vector<double> numbers(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && try_number(fields[k], numbers[k]);
    if (!numeric) {
      if (!seen_content) {
        seen_content = true;
        continue;  // header
      }
      throw ParseError(line_error(line_no, "expected numbers, got '" + std::string(line) + "'"));
    }
    seen_content = true;
    if (fields.size() > 2) throw ParseError(line_error(line_no, "expected one or two columns"));
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) {
      throw ParseError(line_error(line_no, "expected " + std::to_string(columns) + " columns"));
    }
    if (columns == 2) times.push_back(numbers[0]);
    values.push_back(numbers.back());
  }
  if (values.size() < 2) throw ParseError("need at least two observations, found " + std::to_string(values.size()));
  if (columns == 1) return TimeSeriesSample(std::move(values), tau, 0.0, policy);

  const double spacing = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(spacing > 0.0)) throw IrregularSpacing("time stamps must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - spacing) > kSpacingTolerance * spacing) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "spacing " << step << " between observations " << i - 1 << " and " << i
          << " differs from the mean spacing " << spacing;
      throw IrregularSpacing(msg.str());
    }
  }
  return TimeSeriesSample(std::move(values), spacing, times.front(), policy);
}

TimeSeriesSample ingest_csv(const std::filesystem::path& path, double tau, MeanPolicy policy) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return parse_csv(in, tau, policy);
}

void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write(out);
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace oup::cli
