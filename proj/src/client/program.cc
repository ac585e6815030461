#include "teefhe/client/program.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "teefhe/errors.h"

namespace teefhe::client {

namespace {

struct OpInfo {
  const char* name;
  OpCode op;
};

constexpr OpInfo kOps[] = {
    {"ADD", OpCode::kAdd},       {"MUL", OpCode::kMul},
    {"RELIN", OpCode::kRelin},   {"ADDP", OpCode::kAddPlain},
    {"MULP", OpCode::kMulPlain}, {"NEG", OpCode::kNeg},
    {"INPUT", OpCode::kInput},   {"OUTPUT", OpCode::kOutput},
};

std::string OpName(OpCode op) {
  for (const auto& info : kOps) {
    if (info.op == op) return info.name;
  }
  return "?";
}

[[noreturn]] void Fail(int line, const std::string& why) {
  throw ParameterError("program line " + std::to_string(line) + ": " + why);
}

int64_t ParseInt(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size()) Fail(line, "bad integer '" + token + "'");
    return v;
  } catch (const std::logic_error&) {
    Fail(line, "bad integer '" + token + "'");
  }
}

uint64_t ModT(int64_t v, uint64_t t) {
  const int64_t st = static_cast<int64_t>(t);
  return static_cast<uint64_t>(((v % st) + st) % st);
}

// Registers read by an instruction.
std::vector<std::string> Reads(const Instruction& ins) {
  switch (ins.op) {
    case OpCode::kAdd:
    case OpCode::kMul:
      return {ins.src1, ins.src2};
    case OpCode::kAddPlain:
    case OpCode::kMulPlain:
    case OpCode::kNeg:
      return {ins.src1};
    case OpCode::kRelin:
    case OpCode::kOutput:
      return {ins.dst};
    case OpCode::kInput:
      return {};
  }
  return {};
}

// Negacyclic schoolbook product mod t.
std::vector<uint64_t> ShadowMul(const std::vector<uint64_t>& a,
                                const std::vector<uint64_t>& b, uint64_t t) {
  const std::size_t n = a.size();
  std::vector<uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      const uint64_t prod = static_cast<uint64_t>(
          static_cast<unsigned __int128>(a[i]) * b[j] % t);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = (out[k] + prod) % t;
      } else {
        out[k - n] = (out[k - n] + t - prod) % t;
      }
    }
  }
  return out;
}

}  // namespace

Program ParseProgram(const std::string& text) {
  Program prog;
  std::set<std::string> defined;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::replace(raw.begin(), raw.end(), ',', ' ');
    std::istringstream words(raw);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;

    std::string opname = tok[0];
    std::transform(opname.begin(), opname.end(), opname.begin(), ::toupper);
    const auto* info = std::find_if(std::begin(kOps), std::end(kOps),
                                    [&](const OpInfo& o) { return opname == o.name; });
    if (info == std::end(kOps)) Fail(line, "unknown operation '" + tok[0] + "'");

    Instruction ins{info->op, "", "", "", 0, {}, line};
    auto arity = [&](std::size_t want) {
      if (tok.size() != want + 1) {
        Fail(line, opname + " takes " + std::to_string(want) + " operands");
      }
    };
    switch (ins.op) {
      case OpCode::kAdd:
      case OpCode::kMul:
        arity(3);
        ins.dst = tok[1], ins.src1 = tok[2], ins.src2 = tok[3];
        break;
      case OpCode::kAddPlain:
      case OpCode::kMulPlain:
        arity(3);
        ins.dst = tok[1], ins.src1 = tok[2];
        ins.constant = ParseInt(tok[3], line);
        break;
      case OpCode::kNeg:
        arity(2);
        ins.dst = tok[1], ins.src1 = tok[2];
        break;
      case OpCode::kRelin:
      case OpCode::kOutput:
        arity(1);
        ins.dst = tok[1];
        break;
      case OpCode::kInput:
        if (tok.size() < 3) Fail(line, "INPUT needs a register and values");
        ins.dst = tok[1];
        for (std::size_t i = 2; i < tok.size(); ++i) {
          ins.values.push_back(ParseInt(tok[i], line));
        }
        break;
    }
    for (const std::string& r : Reads(ins)) {
      if (!defined.count(r)) Fail(line, "register '" + r + "' used before definition");
    }
    if (ins.op != OpCode::kOutput && ins.op != OpCode::kRelin) {
      defined.insert(ins.dst);
    }
    prog.code.push_back(std::move(ins));
  }
  return prog;
}

Program LoadProgram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open program file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseProgram(text.str());
}

std::string FormatProgram(const Program& program) {
  std::ostringstream out;
  for (const Instruction& ins : program.code) {
    out << OpName(ins.op) << ' ' << ins.dst;
    switch (ins.op) {
      case OpCode::kAdd:
      case OpCode::kMul:
        out << ' ' << ins.src1 << ' ' << ins.src2;
        break;
      case OpCode::kAddPlain:
      case OpCode::kMulPlain:
        out << ' ' << ins.src1 << ' ' << ins.constant;
        break;
      case OpCode::kNeg:
        out << ' ' << ins.src1;
        break;
      case OpCode::kInput:
        for (std::size_t i = 0; i < ins.values.size(); ++i) {
          out << (i == 0 ? ' ' : ',') << ins.values[i];
        }
        break;
      default:
        break;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<uint64_t>> ShadowExecute(const Program& program,
                                                 std::size_t n, uint64_t t) {
  std::map<std::string, std::vector<uint64_t>> regs;
  std::vector<std::vector<uint64_t>> outputs;
  for (const Instruction& ins : program.code) {
    switch (ins.op) {
      case OpCode::kInput: {
        std::vector<uint64_t> v(n, 0);
        for (std::size_t i = 0; i < ins.values.size() && i < n; ++i) {
          v[i] = ModT(ins.values[i], t);
        }
        regs[ins.dst] = std::move(v);
        break;
      }
      case OpCode::kAdd: {
        std::vector<uint64_t> v = regs.at(ins.src1);
        const auto& b = regs.at(ins.src2);
        for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] + b[i]) % t;
        regs[ins.dst] = std::move(v);
        break;
      }
      case OpCode::kMul:
        regs[ins.dst] = ShadowMul(regs.at(ins.src1), regs.at(ins.src2), t);
        break;
      case OpCode::kAddPlain: {
        std::vector<uint64_t> v = regs.at(ins.src1);
        v[0] = (v[0] + ModT(ins.constant, t)) % t;
        regs[ins.dst] = std::move(v);
        break;
      }
      case OpCode::kMulPlain: {
        std::vector<uint64_t> v = regs.at(ins.src1);
        const uint64_t c = ModT(ins.constant, t);
        for (auto& x : v) x = static_cast<uint64_t>(static_cast<unsigned __int128>(x) * c % t);
        regs[ins.dst] = std::move(v);
        break;
      }
      case OpCode::kNeg: {
        std::vector<uint64_t> v = regs.at(ins.src1);
        for (auto& x : v) x = (t - x) % t;
        regs[ins.dst] = std::move(v);
        break;
      }
      case OpCode::kRelin:
        break;
      case OpCode::kOutput:
        outputs.push_back(regs.at(ins.dst));
        break;
    }
  }
  return outputs;
}

RunResult RunProgram(const Program& program, HomomorphicRuntime& runtime) {
  const auto start = std::chrono::steady_clock::now();
  const RuntimeStats before = runtime.stats();
  const uint64_t t = runtime.context()->t().value();
  const she::CostTable& costs = runtime.costs();
  auto cost_of = [&](OpCode op) {
    switch (op) {
      case OpCode::kAdd: return costs.Cost(she::HomOp::kAdd);
      case OpCode::kMul:
        return costs.Cost(she::HomOp::kMultiply) +
               costs.Cost(she::HomOp::kRelinearize);
      case OpCode::kRelin: return costs.Cost(she::HomOp::kRelinearize);
      case OpCode::kAddPlain: return costs.Cost(she::HomOp::kAddPlain);
      case OpCode::kMulPlain: return costs.Cost(she::HomOp::kMultiplyPlain);
      case OpCode::kNeg: return costs.Cost(she::HomOp::kNegate);
      default: return 0;
    }
  };

  RunResult result;
  const auto& code = program.code;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instruction& ins = code[i];
    // Announce what the written register faces next.
    int hint = 0;
    for (std::size_t j = i + 1; j < code.size(); ++j) {
      const auto reads = Reads(code[j]);
      if (std::find(reads.begin(), reads.end(), ins.dst) != reads.end()) {
        hint = cost_of(code[j].op);
        break;
      }
      if (code[j].dst == ins.dst && code[j].op != OpCode::kRelin &&
          code[j].op != OpCode::kOutput) {
        break;  // overwritten before being read again
      }
    }
    runtime.set_next_cost_hint(hint);
    switch (ins.op) {
      case OpCode::kInput: {
        std::vector<uint64_t> v;
        for (int64_t x : ins.values) v.push_back(ModT(x, t));
        runtime.Input(ins.dst, v);
        break;
      }
      case OpCode::kAdd: runtime.Add(ins.dst, ins.src1, ins.src2); break;
      case OpCode::kMul: runtime.Multiply(ins.dst, ins.src1, ins.src2); break;
      case OpCode::kRelin: runtime.Relinearize(ins.dst); break;
      case OpCode::kAddPlain:
        runtime.AddPlain(ins.dst, ins.src1, ModT(ins.constant, t));
        break;
      case OpCode::kMulPlain:
        runtime.MultiplyPlain(ins.dst, ins.src1, ModT(ins.constant, t));
        break;
      case OpCode::kNeg: runtime.Negate(ins.dst, ins.src1); break;
      case OpCode::kOutput:
        runtime.set_next_cost_hint(std::nullopt);
        result.outputs.push_back(runtime.Output(ins.dst));
        break;
    }
    ++result.report.instr_count;
  }
  const RuntimeStats& after = runtime.stats();
  result.report.mul_count = after.mul_count - before.mul_count;
  result.report.bootstrap_count = after.bootstrap_count - before.bootstrap_count;
  result.report.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  return result;
}

void WriteRunReportCsv(std::ostream& out, const RunReport& report) {
  out << "instr_count,mul_count,bootstrap_count,wall_ns\n"
      << report.instr_count << ',' << report.mul_count << ','
      << report.bootstrap_count << ',' << report.wall_ns << '\n';
}

Program RandomProgram(uint64_t seed, std::size_t length, int max_depth,
                      uint64_t t) {
  std::mt19937_64 gen(seed);
  Program prog;
  std::vector<std::pair<std::string, int>> regs;  // name, depth
  int next = 0;
  auto fresh = [&] { return "r" + std::to_string(next++); };
  auto pick = [&] { return regs[gen() % regs.size()]; };
  auto value = [&] {
    return static_cast<int64_t>(gen() % t) - static_cast<int64_t>(t / 2);
  };
  const int inputs = 2 + static_cast<int>(gen() % 2);
  for (int i = 0; i < inputs; ++i) {
    Instruction ins{OpCode::kInput, fresh(), "", "", 0, {}, 0};
    const std::size_t coeffs = 1 + gen() % 4;
    for (std::size_t k = 0; k < coeffs; ++k) ins.values.push_back(value());
    regs.emplace_back(ins.dst, 0);
    prog.code.push_back(std::move(ins));
  }
  while (prog.code.size() + 2 < length) {
    // Half the time extend the newest value so that long chains, and with
    // them deep circuits, show up regularly.
    const auto [a, da] = gen() % 2 ? regs.back() : pick();
    const auto [b, db] = pick();
    const std::string dst = fresh();
    Instruction ins{OpCode::kAdd, dst, a, b, 0, {}, 0};
    int depth = std::max(da, db);
    switch (gen() % 6) {
      case 0: ins.op = OpCode::kAdd; break;
      case 1:
      case 2:
        if (std::max(da, db) + 1 <= max_depth) {
          ins.op = OpCode::kMul;
          depth = std::max(da, db) + 1;
        }
        break;
      case 3:
        ins = {OpCode::kAddPlain, dst, a, "", value(), {}, 0};
        depth = da;
        break;
      case 4:
        ins = {OpCode::kMulPlain, dst, a, "", value(), {}, 0};
        if (ins.constant % static_cast<int64_t>(t) == 0) ins.constant = 1;
        depth = da;
        break;
      case 5:
        ins = {OpCode::kNeg, dst, a, "", 0, {}, 0};
        depth = da;
        break;
    }
    const bool mul = ins.op == OpCode::kMul;
    prog.code.push_back(ins);
    if (mul) prog.code.push_back({OpCode::kRelin, dst, "", "", 0, {}, 0});
    regs.emplace_back(dst, depth);
  }
  prog.code.push_back({OpCode::kOutput, regs.back().first, "", "", 0, {}, 0});
  const auto [other, d] = pick();
  if (other != regs.back().first) {
    prog.code.push_back({OpCode::kOutput, other, "", "", 0, {}, 0});
  }
  return prog;
}

int ProgramDepth(const Program& program) {
  std::map<std::string, int> depth;
  int worst = 0;
  for (const Instruction& ins : program.code) {
    switch (ins.op) {
      case OpCode::kInput: depth[ins.dst] = 0; break;
      case OpCode::kAdd:
        depth[ins.dst] = std::max(depth.at(ins.src1), depth.at(ins.src2));
        break;
      case OpCode::kMul:
        depth[ins.dst] = std::max(depth.at(ins.src1), depth.at(ins.src2)) + 1;
        break;
      case OpCode::kAddPlain:
      case OpCode::kMulPlain:
      case OpCode::kNeg:
        depth[ins.dst] = depth.at(ins.src1);
        break;
      case OpCode::kRelin: break;
      case OpCode::kOutput: worst = std::max(worst, depth.at(ins.dst)); break;
    }
  }
  return worst;
}

}  // namespace teefhe::client
