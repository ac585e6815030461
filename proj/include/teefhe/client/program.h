#ifndef TEEFHE_CLIENT_PROGRAM_H_
#define TEEFHE_CLIENT_PROGRAM_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "teefhe/client/runtime.h"

namespace teefhe::client {

enum class OpCode { kAdd, kMul, kRelin, kAddPlain, kMulPlain, kNeg, kInput, kOutput };

// One line of a straight-line program:
//   ADD r a b | MUL r a b | RELIN r | ADDP r a c | MULP r a c | NEG r a
//   INPUT r v0[,v1,...] | OUTPUT r
// Constants are signed integers interpreted mod t.
struct Instruction {
  OpCode op;
  std::string dst;
  std::string src1;
  std::string src2;
  int64_t constant = 0;
  std::vector<int64_t> values;  // INPUT coefficients
  int line = 0;
};

struct Program {
  std::vector<Instruction> code;
};

// ParameterError naming the line for unknown ops, wrong arity, bad
// constants and registers read before they are written.
Program ParseProgram(const std::string& text);
Program LoadProgram(const std::string& path);
std::string FormatProgram(const Program& program);

// Plaintext evaluation in Z_t[x]/(x^n+1), one vector per OUTPUT.
std::vector<std::vector<uint64_t>> ShadowExecute(const Program& program,
                                                 std::size_t n, uint64_t t);

struct RunReport {
  uint64_t instr_count = 0;
  uint64_t mul_count = 0;
  uint64_t bootstrap_count = 0;
  int64_t wall_ns = 0;
};

struct RunResult {
  std::vector<std::vector<uint64_t>> outputs;
  RunReport report;
};

// Executes on the runtime, announcing the cost of the next instruction that
// reads the written register in every NOISE_REPORT.
RunResult RunProgram(const Program& program, HomomorphicRuntime& runtime);

// Header `instr_count,mul_count,bootstrap_count,wall_ns` plus one row.
void WriteRunReportCsv(std::ostream& out, const RunReport& report);

// Random straight-line program whose multiplicative depth is at most
// `max_depth`; every register is eventually OUTPUT.
Program RandomProgram(uint64_t seed, std::size_t length, int max_depth,
                      uint64_t t);

// Multiplicative depth of every OUTPUT, maximum over outputs.
int ProgramDepth(const Program& program);

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_PROGRAM_H_
