#pragma once

// Random mixed-script sentences for normalization property tests.

#include <random>
#include <string>
#include <vector>

namespace fuzz {

inline std::string pick(std::mt19937& rng, const std::vector<std::string>& pool) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

inline std::string digits(std::mt19937& rng, int n) {
  static const std::vector<std::string> ascii = {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"};
  static const std::vector<std::string> urdu = {"۰", "۱", "۲", "۳", "۴", "۵", "۶", "۷", "۸", "۹"};
  static const std::vector<std::string> arabic = {"٠", "١", "٢", "٣", "٤", "٥", "٦", "٧", "٨", "٩"};
  std::uniform_int_distribution<int> script(0, 5);
  const auto& pool = script(rng) == 0 ? urdu : script(rng) == 1 ? arabic : ascii;
  std::string out;
  for (int i = 0; i < n; ++i) out += pick(rng, pool);
  return out;
}

inline std::string token(std::mt19937& rng) {
  static const std::vector<std::string> urdu = {
      "عراق", "اور", "شام", "اعلان", "کیا", "ہے", "پاکستان", "عدالتِ", "عظمیٰ", "مَدَ", "بینک", "فیصد",
      "کرکٹ", "میں", "تھا", "کی", "کے", "ڈالر", "قرض", "معاہدہ", "لائن", "آف", "کنٹرول", "فائربندی"};
  static const std::vector<std::string> latin = {"line", "of", "control", "USD", "Bank", "news", "a", "Z", "IMF"};
  static const std::vector<std::string> punct = {"؟", "،", "۔", "؛", "٪", ",", ".", "!", "?", ":", "\"", "«", "»",
                                                 "(", ")", "-", "\xE2\x80\x94", "'", "…"};
  static const std::vector<std::string> currency = {"$", "€", "£", "₨", "¥"};
  static const std::vector<std::string> spaces = {" ", "  ", "\t", "\n", " ", "​", " 　 "};
  std::uniform_int_distribution<int> kind(0, 13);
  switch (kind(rng)) {
    case 0:
    case 1:
    case 2:
    case 3: return pick(rng, urdu);
    case 4: return pick(rng, latin);
    case 5: return digits(rng, std::uniform_int_distribution<int>(1, 5)(rng));
    case 6: return pick(rng, punct);
    case 7: return pick(rng, currency) + digits(rng, 2);
    case 8: return "www." + pick(rng, latin) + ".com";
    case 9: return "https://" + pick(rng, latin) + ".pk/" + digits(rng, 3) + "?q=" + pick(rng, urdu);
    case 10: return pick(rng, latin) + "." + pick(rng, latin) + "@mail.example.org";
    case 11: return digits(rng, 4) + "-" + digits(rng, 3) + "-" + digits(rng, 3);
    case 12: return "+92 " + digits(rng, 3) + " " + digits(rng, 7);
    default: return pick(rng, urdu) + pick(rng, punct) + pick(rng, latin) + pick(rng, spaces);
  }
}

inline std::string sentence(std::mt19937& rng) {
  static const std::vector<std::string> spaces = {" ", " ", " ", "  ", "\t", "\n", " ", "​"};
  std::uniform_int_distribution<int> len(0, 18);
  std::uniform_int_distribution<int> glue(0, 6);
  std::string out;
  int n = len(rng);
  if (glue(rng) == 0) out += pick(rng, spaces);
  for (int i = 0; i < n; ++i) {
    out += token(rng);
    // Occasionally glue tokens together with no separator.
    if (glue(rng) != 0) out += pick(rng, spaces);
  }
  return out;
}

inline std::vector<std::string> corpus(unsigned seed, int count) {
  std::mt19937 rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sentence(rng));
  return out;
}

}  // namespace fuzz
