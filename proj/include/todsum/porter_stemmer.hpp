// Copyright 2026 The TODSum Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Porter (1980) suffix-stripping stemmer for lowercase English words.
// Only used when the tokenizer's stemming flag is switched on.

#pragma once

#include <string>
#include <string_view>

namespace todsum {

class PorterStemmer {
 public:
  // Tokens containing anything but lowercase ASCII letters (numbers, "4-star",
  // times) and words of length <= 2 are returned unchanged.
  std::string operator()(std::string_view word) const {
    for (char c : word) {
      if (c < 'a' || c > 'z') return std::string(word);
    }
    if (word.size() <= 2) return std::string(word);
    State s{std::string(word), static_cast<int>(word.size()) - 1, 0};
    s.step1ab();
    if (s.k > 0) {
      s.step1c();
      s.step2();
      s.step3();
      s.step4();
      s.step5();
    }
    return s.b.substr(0, static_cast<std::size_t>(s.k + 1));
  }

 private:
  struct State {
    std::string b;
    int k;  // end of the current stem (inclusive)
    int j;  // end of the stem before the matched suffix

    bool cons(int i) const {
      switch (b[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
          return false;
        case 'y':
          return i == 0 ? true : !cons(i - 1);
        default:
          return true;
      }
    }

    // Number of consonant-vowel sequences in b[0..j].
    int m() const {
      int n = 0;
      int i = 0;
      while (true) {
        if (i > j) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
      while (true) {
        while (true) {
          if (i > j) return n;
          if (cons(i)) break;
          ++i;
        }
        ++i;
        ++n;
        while (true) {
          if (i > j) return n;
          if (!cons(i)) break;
          ++i;
        }
        ++i;
      }
    }

    bool vowel_in_stem() const {
      for (int i = 0; i <= j; ++i) {
        if (!cons(i)) return true;
      }
      return false;
    }

    bool double_consonant(int i) const {
      if (i < 1) return false;
      if (b[i] != b[i - 1]) return false;
      return cons(i);
    }

    bool cvc(int i) const {
      if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
      char ch = b[i];
      return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(std::string_view s) {
      int len = static_cast<int>(s.size());
      if (len > k + 1) return false;
      if (std::string_view(b).substr(k - len + 1, len) != s) return false;
      j = k - len;
      return true;
    }

    void set_to(std::string_view s) {
      b.replace(j + 1, k - j, s);
      k = j + static_cast<int>(s.size());
    }

    void replace_if_measured(std::string_view s) {
      if (m() > 0) set_to(s);
    }

    void step1ab() {
      if (b[k] == 's') {
        if (ends("sses")) {
          k -= 2;
        } else if (ends("ies")) {
          set_to("i");
        } else if (b[k - 1] != 's') {
          --k;
        }
      }
      if (ends("eed")) {
        if (m() > 0) --k;
      } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
        k = j;
        if (ends("at")) {
          set_to("ate");
        } else if (ends("bl")) {
          set_to("ble");
        } else if (ends("iz")) {
          set_to("ize");
        } else if (double_consonant(k)) {
          --k;
          char ch = b[k];
          if (ch == 'l' || ch == 's' || ch == 'z') ++k;
        } else {
          j = k;
          if (m() == 1 && cvc(k)) set_to("e");
        }
      }
    }

    void step1c() {
      if (ends("y") && vowel_in_stem()) b[k] = 'i';
    }

    bool try_rules(std::initializer_list<std::pair<std::string_view,
                                                   std::string_view>> rules) {
      for (const auto& [suffix, replacement] : rules) {
        if (ends(suffix)) {
          replace_if_measured(replacement);
          return true;
        }
      }
      return false;
    }

    void step2() {
      if (k < 1) return;
      switch (b[k - 1]) {
        case 'a':
          try_rules({{"ational", "ate"}, {"tional", "tion"}});
          break;
        case 'c':
          try_rules({{"enci", "ence"}, {"anci", "ance"}});
          break;
        case 'e':
          try_rules({{"izer", "ize"}});
          break;
        case 'l':
          try_rules({{"bli", "ble"},
                     {"alli", "al"},
                     {"entli", "ent"},
                     {"eli", "e"},
                     {"ousli", "ous"}});
          break;
        case 'o':
          try_rules({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}});
          break;
        case 's':
          try_rules({{"alism", "al"},
                     {"iveness", "ive"},
                     {"fulness", "ful"},
                     {"ousness", "ous"}});
          break;
        case 't':
          try_rules({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}});
          break;
        case 'g':
          try_rules({{"logi", "log"}});
          break;
        default:
          break;
      }
    }

    void step3() {
      switch (b[k]) {
        case 'e':
          try_rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}});
          break;
        case 'i':
          try_rules({{"iciti", "ic"}});
          break;
        case 'l':
          try_rules({{"ical", "ic"}, {"ful", ""}});
          break;
        case 's':
          try_rules({{"ness", ""}});
          break;
        default:
          break;
      }
    }

    void step4() {
      if (k < 1) return;
      bool matched = false;
      switch (b[k - 1]) {
        case 'a':
          matched = ends("al");
          break;
        case 'c':
          matched = ends("ance") || ends("ence");
          break;
        case 'e':
          matched = ends("er");
          break;
        case 'i':
          matched = ends("ic");
          break;
        case 'l':
          matched = ends("able") || ends("ible");
          break;
        case 'n':
          matched = ends("ant") || ends("ement") || ends("ment") || ends("ent");
          break;
        case 'o':
          if (ends("ion") && j >= 0 && (b[j] == 's' || b[j] == 't')) {
            matched = true;
          } else {
            matched = ends("ou");
          }
          break;
        case 's':
          matched = ends("ism");
          break;
        case 't':
          matched = ends("ate") || ends("iti");
          break;
        case 'u':
          matched = ends("ous");
          break;
        case 'v':
          matched = ends("ive");
          break;
        case 'z':
          matched = ends("ize");
          break;
        default:
          break;
      }
      if (matched && m() > 1) k = j;
    }

    void step5() {
      j = k;
      if (b[k] == 'e') {
        int a = m();
        if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
      }
      if (b[k] == 'l' && double_consonant(k) && m() > 1) --k;
    }
  };
};

}  // namespace todsum
