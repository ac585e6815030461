#include "teefhe/she/serialization.h"

#include <bit>
#include <cstring>
#include <string>

#include "teefhe/errors.h"

namespace teefhe::she {

namespace {

constexpr uint8_t kMagic[4] = {'T', 'F', 'H', 'E'};

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Raw(const uint8_t* p, std::size_t len) { out_.insert(out_.end(), p, p + len); }
  void Poly(const teefhe::Poly& p) {
    for (uint64_t c : p.coeffs()) U64(c);
  }
  Bytes Take() { return std::move(out_); }

 private:
  void Le(uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView bytes) : bytes_(bytes) {}

  std::size_t offset() const { return offset_; }
  uint8_t U8() { return static_cast<uint8_t>(Le(1)); }
  uint32_t U32() { return static_cast<uint32_t>(Le(4)); }
  uint64_t U64() { return Le(8); }
  double F64() { return std::bit_cast<double>(U64()); }

  teefhe::Poly ReadPoly(std::size_t n, const Modulus& modulus) {
    Need(n * 8);
    std::vector<uint64_t> coeffs(n);
    for (auto& c : coeffs) {
      const std::size_t at = offset_;
      c = U64();
      if (c >= modulus.value()) Fail(at, "coefficient out of range");
    }
    return teefhe::Poly::FromCoefficients(std::move(coeffs), modulus);
  }

  void ExpectEnd() const {
    if (offset_ != bytes_.size()) Fail(offset_, "trailing bytes");
  }

  [[noreturn]] static void Fail(std::size_t at, const std::string& what) {
    throw DeserializationError(at, what);
  }

 private:
  void Need(std::size_t len) const {
    if (bytes_.size() - offset_ < len) Fail(offset_, "truncated buffer");
  }
  uint64_t Le(int len) {
    Need(static_cast<std::size_t>(len));
    uint64_t v = 0;
    for (int i = 0; i < len; ++i) {
      v |= uint64_t{bytes_[offset_ + i]} << (8 * i);
    }
    offset_ += static_cast<std::size_t>(len);
    return v;
  }

  ByteView bytes_;
  std::size_t offset_ = 0;
};

struct Header {
  ObjectKind kind;
  uint32_t n;
  uint64_t q;
  uint64_t t;
  uint8_t parts;
};

void WriteHeader(Writer& w, ObjectKind kind, uint32_t n, uint64_t q,
                 uint64_t t, uint8_t parts) {
  w.Raw(kMagic, 4);
  w.U8(kFormatVersion);
  w.U8(static_cast<uint8_t>(kind));
  w.U32(n);
  w.U64(q);
  w.U64(t);
  w.U8(parts);
}

Header ReadHeader(Reader& r) {
  for (uint8_t expected : kMagic) {
    const std::size_t at = r.offset();
    if (r.U8() != expected) Reader::Fail(at, "bad magic");
  }
  {
    const std::size_t at = r.offset();
    if (r.U8() != kFormatVersion) Reader::Fail(at, "unsupported version");
  }
  Header h;
  const std::size_t kind_at = r.offset();
  const uint8_t kind = r.U8();
  if (kind < 1 || kind > 6) Reader::Fail(kind_at, "unknown object kind");
  h.kind = static_cast<ObjectKind>(kind);
  h.n = r.U32();
  h.q = r.U64();
  h.t = r.U64();
  h.parts = r.U8();
  return h;
}

void WritePolyObject(Writer& w, const Context& ctx, ObjectKind kind,
                     const std::vector<const Poly*>& parts) {
  if (parts.size() > 255) throw ParameterError("too many parts to serialize");
  WriteHeader(w, kind, static_cast<uint32_t>(ctx.n()), ctx.q().value(),
              ctx.t().value(), static_cast<uint8_t>(parts.size()));
  for (const Poly* p : parts) {
    if (p->n() != ctx.n()) throw ParameterError("part does not match n");
    w.Poly(*p);
  }
}

// Reads and checks the envelope; returns the part count.
uint8_t ReadEnvelope(Reader& r, const Context& ctx, ObjectKind kind) {
  const Header h = ReadHeader(r);
  if (h.kind != kind) Reader::Fail(5, "unexpected object kind");
  if (h.n != ctx.n()) Reader::Fail(6, "ring degree does not match context");
  if (h.q != ctx.q().value()) Reader::Fail(10, "q does not match context");
  if (h.t != ctx.t().value()) Reader::Fail(18, "t does not match context");
  return h.parts;
}

std::vector<Poly> ReadParts(Reader& r, const Context& ctx, std::size_t count,
                            const Modulus& modulus) {
  std::vector<Poly> parts;
  for (std::size_t i = 0; i < count; ++i) {
    parts.push_back(r.ReadPoly(ctx.n(), modulus));
  }
  r.ExpectEnd();
  return parts;
}

void RequireParts(bool ok, const char* what) {
  if (!ok) Reader::Fail(kHeaderSize - 1, what);
}

}  // namespace

Bytes SerializeParams(const EncryptionParams& params) {
  Writer w;
  WriteHeader(w, ObjectKind::kParams, static_cast<uint32_t>(params.n),
              params.q, params.t, 0);
  w.F64(params.stddev);
  w.U32(params.bound);
  w.U8(params.relin_window);
  return w.Take();
}

EncryptionParams DeserializeParams(ByteView bytes) {
  Reader r(bytes);
  const Header h = ReadHeader(r);
  if (h.kind != ObjectKind::kParams) Reader::Fail(5, "unexpected object kind");
  if (h.parts != 0) Reader::Fail(kHeaderSize - 1, "params carry no parts");
  EncryptionParams p;
  p.n = h.n;
  p.q = h.q;
  p.t = h.t;
  p.stddev = r.F64();
  p.bound = r.U32();
  p.relin_window = r.U8();
  r.ExpectEnd();
  return p;
}

Bytes Serialize(const Context& ctx, const Plaintext& pt) {
  Writer w;
  WritePolyObject(w, ctx, ObjectKind::kPlaintext, {&pt.m});
  return w.Take();
}

Bytes Serialize(const Context& ctx, const Ciphertext& ct) {
  Writer w;
  std::vector<const Poly*> parts;
  for (const Poly& p : ct.parts) parts.push_back(&p);
  WritePolyObject(w, ctx, ObjectKind::kCiphertext, parts);
  return w.Take();
}

Bytes Serialize(const Context& ctx, const PublicKey& pk) {
  Writer w;
  WritePolyObject(w, ctx, ObjectKind::kPublicKey, {&pk.pk0, &pk.pk1});
  return w.Take();
}

Bytes Serialize(const Context& ctx, const SecretKey& sk) {
  Writer w;
  WritePolyObject(w, ctx, ObjectKind::kSecretKey, {&sk.s});
  return w.Take();
}

Bytes Serialize(const Context& ctx, const EvalKeys& evk) {
  Writer w;
  std::vector<const Poly*> parts;
  for (const auto& d : evk.digits) {
    parts.push_back(&d[0]);
    parts.push_back(&d[1]);
  }
  WritePolyObject(w, ctx, ObjectKind::kEvalKeys, parts);
  return w.Take();
}

Plaintext DeserializePlaintext(const Context& ctx, ByteView bytes) {
  Reader r(bytes);
  const uint8_t count = ReadEnvelope(r, ctx, ObjectKind::kPlaintext);
  RequireParts(count == 1, "plaintext must have one part");
  auto parts = ReadParts(r, ctx, count, ctx.t());
  return Plaintext{std::move(parts[0])};
}

Ciphertext DeserializeCiphertext(const Context& ctx, ByteView bytes) {
  Reader r(bytes);
  const uint8_t count = ReadEnvelope(r, ctx, ObjectKind::kCiphertext);
  RequireParts(count == 2 || count == 3, "ciphertext must have 2 or 3 parts");
  return Ciphertext{ReadParts(r, ctx, count, ctx.q()), ctx.params_id()};
}

PublicKey DeserializePublicKey(const Context& ctx, ByteView bytes) {
  Reader r(bytes);
  const uint8_t count = ReadEnvelope(r, ctx, ObjectKind::kPublicKey);
  RequireParts(count == 2, "public key must have two parts");
  auto parts = ReadParts(r, ctx, count, ctx.q());
  return PublicKey{std::move(parts[0]), std::move(parts[1])};
}

SecretKey DeserializeSecretKey(const Context& ctx, ByteView bytes) {
  Reader r(bytes);
  const uint8_t count = ReadEnvelope(r, ctx, ObjectKind::kSecretKey);
  RequireParts(count == 1, "secret key must have one part");
  auto parts = ReadParts(r, ctx, count, ctx.q());
  return SecretKey{std::move(parts[0])};
}

EvalKeys DeserializeEvalKeys(const Context& ctx, ByteView bytes) {
  Reader r(bytes);
  const uint8_t count = ReadEnvelope(r, ctx, ObjectKind::kEvalKeys);
  RequireParts(count == 2 * ctx.params().relin_digit_count(),
               "evaluation key part count does not match params");
  auto parts = ReadParts(r, ctx, count, ctx.q());
  EvalKeys evk;
  for (std::size_t j = 0; j < parts.size(); j += 2) {
    evk.digits.push_back({std::move(parts[j]), std::move(parts[j + 1])});
  }
  return evk;
}

ObjectKind PeekKind(ByteView bytes) {
  Reader r(bytes);
  return ReadHeader(r).kind;
}

}  // namespace teefhe::she
