#pragma once

#include "sealev/clock.hpp"
#include "sealev/hashing.hpp"
#include "sealev/types.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

inline constexpr std::size_t kSealNonceBytes = 24;
using SealNonce = std::array<unsigned char, kSealNonceBytes>;
using NonceProvider = std::function<SealNonce()>;

// Arbitrary organizer key material; stretched to the cipher key via SHA-256.
using KeyMaterial = Bytes;

KeyMaterial key_from_file(const std::filesystem::path& path);
NonceProvider random_nonce();
NonceProvider fixed_nonce(const SealNonce& nonce);

// Counts only; never any task text. Published alongside the fingerprint.
struct ContentsManifest {
  std::int64_t task_count = 0;
  std::int64_t instance_count = 0;
};

struct SealedBundle {
  // Full encrypted archive: magic || nonce || secretbox(archive). The
  // fingerprint commits to these exact bytes.
  Bytes ciphertext;
  std::string fingerprint;  // sha256 hex of ciphertext
  Timestamp sealed_at = 0;
  ContentsManifest manifest;
};

// Encrypts the canonical task archive. Tasks must pass validation (refused
// otherwise, naming the first violation code); the task list must be
// non-empty; the key must be non-empty. Deterministic for fixed tasks, key,
// and nonce.
SealedBundle seal_bundle(const std::vector<TaskDefinition>& tasks, const KeyMaterial& key,
                         const Clock& clock, const Syllabus& syllabus,
                         const NonceProvider& nonce = random_nonce());

// Fails closed: "TAMPERED" on structural damage or fingerprint mismatch,
// "UNSEAL_AUTH_FAILED" on authentication failure (wrong key). No partial
// plaintext is ever returned.
std::vector<TaskDefinition> unseal_bundle(const SealedBundle& sealed, const KeyMaterial& key);

bool verify_fingerprint(const Bytes& ciphertext, std::string_view published);

// Nonce recorded inside the blob; released post-event so third parties can
// re-derive the ciphertext for fingerprint verification.
SealNonce extract_nonce(const Bytes& ciphertext);

// Disk layout: <base>.sealed (ciphertext), <base>.fingerprint (hex, one
// line), <base>.manifest.json (public counts).
void save_sealed_bundle(const SealedBundle& bundle, const std::filesystem::path& base);
SealedBundle load_sealed_bundle(const std::filesystem::path& base);

}  // namespace sealev
