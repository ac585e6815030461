#ifndef TEEFHE_SHE_SERIALIZATION_H_
#define TEEFHE_SHE_SERIALIZATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "teefhe/she/context.h"
#include "teefhe/she/params.h"
#include "teefhe/she/types.h"

// Little-endian envelope shared by every object:
//   "TFHE" | version u8 | kind u8 | n u32 | q u64 | t u64 | parts u8
// followed by parts * n coefficient words. Parameters use zero parts and
// append stddev (f64), bound (u32) and the relinearization window (u8).
namespace teefhe::she {

enum class ObjectKind : uint8_t {
  kParams = 1,
  kPlaintext = 2,
  kCiphertext = 3,
  kPublicKey = 4,
  kSecretKey = 5,
  kEvalKeys = 6,
};

inline constexpr uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 4 + 8 + 8 + 1;

inline constexpr std::size_t SerializedPolyObjectSize(std::size_t n,
                                                      std::size_t parts) {
  return kHeaderSize + parts * n * sizeof(uint64_t);
}

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

Bytes SerializeParams(const EncryptionParams& params);
EncryptionParams DeserializeParams(ByteView bytes);

Bytes Serialize(const Context& ctx, const Plaintext& pt);
Bytes Serialize(const Context& ctx, const Ciphertext& ct);
Bytes Serialize(const Context& ctx, const PublicKey& pk);
Bytes Serialize(const Context& ctx, const SecretKey& sk);
Bytes Serialize(const Context& ctx, const EvalKeys& evk);

// Each reader checks the envelope against ctx and throws
// DeserializationError carrying the offset of the first bad byte.
Plaintext DeserializePlaintext(const Context& ctx, ByteView bytes);
Ciphertext DeserializeCiphertext(const Context& ctx, ByteView bytes);
PublicKey DeserializePublicKey(const Context& ctx, ByteView bytes);
SecretKey DeserializeSecretKey(const Context& ctx, ByteView bytes);
EvalKeys DeserializeEvalKeys(const Context& ctx, ByteView bytes);

// Reads only the kind byte, after checking magic and version.
ObjectKind PeekKind(ByteView bytes);

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_SERIALIZATION_H_
