#include "nuimlc/mapper.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nuimlc {

namespace {

constexpr std::size_t kMaxLevels = 16;  // bounds joint-table enumeration at 2^16

std::size_t checked_num_words(std::size_t levels) {
  if (levels == 0 || levels > kMaxLevels) {
    throw std::invalid_argument("mapper: levels must lie in [1, 16]");
  }
  return std::size_t{1} << levels;
}

}  // namespace

DeterministicMapper::DeterministicMapper(std::size_t levels, std::vector<std::uint32_t> table,
                                         std::uint32_t output_alphabet_size)
    : levels_(levels), table_(std::move(table)), output_alphabet_size_(output_alphabet_size) {
  const std::size_t words = checked_num_words(levels_);
  if (table_.size() != words) {
    throw std::invalid_argument("mapper: table must have exactly 2^m entries");
  }
  if (output_alphabet_size_ == 0) {
    throw std::invalid_argument("mapper: output alphabet must be nonempty");
  }
  for (std::uint32_t x : table_) {
    if (x >= output_alphabet_size_) {
      throw std::invalid_argument("mapper: table entry outside output alphabet");
    }
  }
}

DeterministicMapper build_threshold_mapper(std::size_t levels, std::uint32_t k) {
  const std::size_t words = checked_num_words(levels);
  if (k > words) {
    throw std::invalid_argument("build_threshold_mapper: k must satisfy 0 <= k <= 2^m");
  }
  std::vector<std::uint32_t> table(words);
  for (std::size_t w = 0; w < words; ++w) table[w] = (w < k) ? 1u : 0u;
  return DeterministicMapper(levels, std::move(table), 2);
}

std::vector<double> induced_distribution(const DeterministicMapper& mapper) {
  std::vector<std::size_t> counts(mapper.output_alphabet_size(), 0);
  for (std::size_t w = 0; w < mapper.num_words(); ++w) counts[mapper.map(w)]++;
  const double scale = 1.0 / static_cast<double>(mapper.num_words());
  std::vector<double> dist(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    dist[x] = static_cast<double>(counts[x]) * scale;  // exact dyadic
  }
  return dist;
}

std::uint32_t dyadic_approximation(double p_target, std::size_t levels) {
  const std::size_t words = checked_num_words(levels);
  if (!(p_target >= 0.0 && p_target <= 1.0)) {
    throw std::domain_error("dyadic_approximation: p_target must lie in [0,1]");
  }
  const double x = p_target * static_cast<double>(words);
  double k0 = std::floor(x);
  double frac = x - k0;
  double k = (frac > 0.5) ? k0 + 1.0 : k0;  // frac == 0.5 ties toward smaller k
  if (k < 0.0) k = 0.0;
  if (k > static_cast<double>(words)) k = static_cast<double>(words);
  return static_cast<std::uint32_t>(k);
}

TimeShareSplit timeshare_split(double p_target, std::size_t levels) {
  const std::size_t words = checked_num_words(levels);
  if (!(p_target >= 0.0 && p_target <= 1.0)) {
    throw std::domain_error("timeshare_split: p_target must lie in [0,1]");
  }
  const double x = p_target * static_cast<double>(words);
  double k = std::floor(x);
  if (k > static_cast<double>(words - 1)) k = static_cast<double>(words - 1);
  TimeShareSplit split;
  split.levels = levels;
  split.k = static_cast<std::uint32_t>(k);
  split.lambda = (k + 1.0) - x;  // solves lambda k/2^m + (1-lambda)(k+1)/2^m = p
  return split;
}

std::string mapper_to_string(const DeterministicMapper& mapper) {
  std::ostringstream out;
  out << "m=" << mapper.levels() << " table=";
  for (std::size_t w = 0; w < mapper.num_words(); ++w) {
    if (w) out << ',';
    out << mapper.map(w);
  }
  return out.str();
}

DeterministicMapper mapper_from_string(const std::string& line) {
  std::istringstream in(line);
  std::string m_field, table_field;
  if (!(in >> m_field >> table_field) || m_field.rfind("m=", 0) != 0 ||
      table_field.rfind("table=", 0) != 0) {
    throw std::invalid_argument("mapper_from_string: expected \"m=<m> table=<...>\"");
  }
  const std::size_t levels = std::stoul(m_field.substr(2));
  std::vector<std::uint32_t> table;
  std::istringstream entries(table_field.substr(6));
  std::string tok;
  std::uint32_t max_sym = 0;
  while (std::getline(entries, tok, ',')) {
    const unsigned long v = std::stoul(tok);
    table.push_back(static_cast<std::uint32_t>(v));
    max_sym = std::max(max_sym, table.back());
  }
  return DeterministicMapper(levels, std::move(table), std::max(max_sym + 1, 2u));
}

}  // namespace nuimlc
