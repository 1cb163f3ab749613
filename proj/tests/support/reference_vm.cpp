#include "support/reference_vm.hpp"

#include <array>

namespace refsim {

std::string nth_string(std::uint64_t index) {
  // lengths come in blocks: one empty string, two of length 1, four of
  // length 2, and so on; peel blocks until the index lands inside one
  int len = 0;
  std::uint64_t start = 0, block = 1;
  while (index >= start + block) {
    start += block;
    block <<= 1;
    ++len;
  }
  std::uint64_t offset = index - start;
  std::string s(static_cast<std::size_t>(len), '0');
  for (int i = 0; i < len; ++i)
    if (offset & (std::uint64_t{1} << (len - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

std::uint64_t string_index(const std::string& s) {
  std::uint64_t start = (std::uint64_t{1} << s.size()) - 1;  // 2^len - 1 shorter strings
  std::uint64_t offset = 0;
  for (char ch : s) offset = offset * 2 + (ch == '1' ? 1 : 0);
  return start + offset;
}

Settled settle(const std::string& program, const std::string& input) {
  const std::size_t nslots = (program.size() + 2) / 3;
  auto slot_bit = [&](std::size_t pc, int k) -> int {
    std::size_t pos = 3 * pc + static_cast<std::size_t>(k);
    return pos < program.size() && program[pos] == '1' ? 1 : 0;
  };

  std::array<int, 8> ring{};
  std::size_t pc = 0, cursor = 0;
  int head = 0;
  std::string out;

  // pc in [0, nslots), head in [0,8), 256 ring contents, cursor in
  // [0, |input|]; one extra step forces a configuration revisit
  const std::uint64_t limit =
      static_cast<std::uint64_t>(nslots + 1) * 8 * 256 * (input.size() + 1) + 1;

  for (std::uint64_t t = 1; t <= limit; ++t) {
    if (pc >= nslots) return {};  // ran past the last slot: idles forever
    int op = 4 * slot_bit(pc, 0) + 2 * slot_bit(pc, 1) + slot_bit(pc, 2);
    switch (op) {
      case 0:
        return {true, t, out};
      case 1:
        head = (head + 1) % 8;
        break;
      case 2:
        head = (head + 7) % 8;
        break;
      case 3:
        ring[static_cast<std::size_t>(head)] ^= 1;
        break;
      case 4:
        out += static_cast<char>('0' + ring[static_cast<std::size_t>(head)]);
        break;
      case 5:
        if (cursor < input.size()) {
          ring[static_cast<std::size_t>(head)] = input[cursor] == '1' ? 1 : 0;
          ++cursor;
        } else {
          ring[static_cast<std::size_t>(head)] = 0;
        }
        break;
      case 6:
        if (ring[static_cast<std::size_t>(head)] == 0) {
          pc = 0;
          continue;
        }
        break;
      case 7:
        out.append(input, cursor, std::string::npos);
        return {true, t, out};
    }
    ++pc;
  }
  return {};  // pigeonhole: some configuration repeated without halting
}

Tables tables(int max_len) {
  Tables tb;
  tb.max_len = max_len;
  std::uint64_t count = (std::uint64_t{2} << max_len) - 1;  // strings up to max_len
  tb.programs.reserve(count);
  tb.h.assign(static_cast<std::size_t>(max_len) + 1, 0);
  tb.H.assign(static_cast<std::size_t>(max_len) + 1, 0);
  tb.bb.assign(static_cast<std::size_t>(max_len) + 1, 0);

  for (std::uint64_t i = 0; i < count; ++i) {
    std::string p = nth_string(i);
    Settled s = settle(p, "");
    if (s.halts) {
      tb.h[p.size()] += 1;
      auto it = tb.k.find(s.output);
      if (it == tb.k.end()) tb.k.emplace(s.output, static_cast<int>(p.size()));
    }
    tb.programs.push_back(std::move(s));
  }

  std::uint64_t cum = 0, best = 0;
  std::uint64_t idx = 0;
  for (int n = 0; n <= max_len; ++n) {
    cum += tb.h[static_cast<std::size_t>(n)];
    tb.H[static_cast<std::size_t>(n)] = cum;
    std::uint64_t block = std::uint64_t{1} << n;
    for (std::uint64_t j = 0; j < block; ++j, ++idx) {
      const Settled& s = tb.programs[idx];
      if (s.halts && s.steps > best) best = s.steps;
    }
    tb.bb[static_cast<std::size_t>(n)] = best;
  }

  tb.b.assign(static_cast<std::size_t>(max_len) + 1, -1);
  for (const auto& [out, len] : tb.k) {
    long long id = static_cast<long long>(string_index(out));
    for (int m = len; m <= max_len; ++m)
      if (id > tb.b[static_cast<std::size_t>(m)]) tb.b[static_cast<std::size_t>(m)] = id;
  }
  return tb;
}

}  // namespace refsim
