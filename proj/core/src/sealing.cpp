#include "sealev/sealing.hpp"

#include "sealev/error.hpp"
#include "sealev/task_io.hpp"
#include "sealev/validation.hpp"

#include <sodium.h>

#include <cstring>

namespace sealev {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'A', 'L', 'E', 'V', '0', '1'};
constexpr std::size_t kHeaderBytes = sizeof(kMagic) + kSealNonceBytes;

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("CRYPTO_INIT_FAILED", "libsodium initialization failed");
}

std::array<unsigned char, crypto_secretbox_KEYBYTES> stretch_key(const KeyMaterial& key) {
  if (key.empty()) throw Error("EMPTY_KEY", "organizer key material is empty");
  std::array<unsigned char, crypto_secretbox_KEYBYTES> out{};
  static_assert(crypto_secretbox_KEYBYTES == crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), key.data(), key.size());
  return out;
}

}  // namespace

KeyMaterial key_from_file(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  return KeyMaterial(raw.begin(), raw.end());
}

NonceProvider random_nonce() {
  return [] {
    ensure_sodium();
    SealNonce nonce;
    randombytes_buf(nonce.data(), nonce.size());
    return nonce;
  };
}

NonceProvider fixed_nonce(const SealNonce& nonce) {
  return [nonce] { return nonce; };
}

SealedBundle seal_bundle(const std::vector<TaskDefinition>& tasks, const KeyMaterial& key,
                         const Clock& clock, const Syllabus& syllabus,
                         const NonceProvider& nonce_provider) {
  ensure_sodium();
  if (tasks.empty()) throw Error("EMPTY_BUNDLE", "refusing to seal an empty task set");
  for (const auto& task : tasks) {
    auto violations = validate_task_proposal(task, syllabus);
    if (!violations.empty()) {
      throw Error(violations.front().code, "task " + task.task_id + " failed validation");
    }
  }

  const auto cipher_key = stretch_key(key);
  const SealNonce nonce = nonce_provider();
  static_assert(kSealNonceBytes == crypto_secretbox_NONCEBYTES);

  const std::string archive = encode_task_archive(tasks);

  SealedBundle bundle;
  bundle.ciphertext.resize(kHeaderBytes + crypto_secretbox_MACBYTES + archive.size());
  std::memcpy(bundle.ciphertext.data(), kMagic, sizeof(kMagic));
  std::memcpy(bundle.ciphertext.data() + sizeof(kMagic), nonce.data(), nonce.size());
  crypto_secretbox_easy(bundle.ciphertext.data() + kHeaderBytes,
                        reinterpret_cast<const unsigned char*>(archive.data()), archive.size(),
                        nonce.data(), cipher_key.data());

  bundle.fingerprint = sha256_hex(bundle.ciphertext);
  bundle.sealed_at = clock();
  bundle.manifest.task_count = static_cast<std::int64_t>(tasks.size());
  for (const auto& task : tasks) {
    bundle.manifest.instance_count += static_cast<std::int64_t>(task.instances.size());
  }
  return bundle;
}

std::vector<TaskDefinition> unseal_bundle(const SealedBundle& sealed, const KeyMaterial& key) {
  ensure_sodium();
  if (!sealed.fingerprint.empty() && !verify_fingerprint(sealed.ciphertext, sealed.fingerprint)) {
    throw Error("TAMPERED", "ciphertext does not match the recorded fingerprint");
  }
  if (sealed.ciphertext.size() < kHeaderBytes + crypto_secretbox_MACBYTES ||
      std::memcmp(sealed.ciphertext.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error("TAMPERED", "sealed blob is structurally damaged");
  }

  const auto cipher_key = stretch_key(key);
  const unsigned char* nonce = sealed.ciphertext.data() + sizeof(kMagic);
  const unsigned char* box = sealed.ciphertext.data() + kHeaderBytes;
  const std::size_t box_len = sealed.ciphertext.size() - kHeaderBytes;

  std::string archive(box_len - crypto_secretbox_MACBYTES, '\0');
  if (crypto_secretbox_open_easy(reinterpret_cast<unsigned char*>(archive.data()), box, box_len,
                                 nonce, cipher_key.data()) != 0) {
    throw Error("UNSEAL_AUTH_FAILED", "authentication failed (wrong key or corrupt box)");
  }
  return decode_task_archive(archive);
}

bool verify_fingerprint(const Bytes& ciphertext, std::string_view published) {
  return sha256_hex(ciphertext) == published;
}

SealNonce extract_nonce(const Bytes& ciphertext) {
  if (ciphertext.size() < kHeaderBytes) {
    throw Error("TAMPERED", "sealed blob shorter than its header");
  }
  SealNonce nonce;
  std::memcpy(nonce.data(), ciphertext.data() + sizeof(kMagic), nonce.size());
  return nonce;
}

void save_sealed_bundle(const SealedBundle& bundle, const std::filesystem::path& base) {
  std::filesystem::path sealed = base;
  sealed += ".sealed";
  std::filesystem::path fingerprint = base;
  fingerprint += ".fingerprint";
  std::filesystem::path manifest = base;
  manifest += ".manifest.json";

  write_file(sealed, std::string_view(reinterpret_cast<const char*>(bundle.ciphertext.data()),
                                      bundle.ciphertext.size()));
  write_file(fingerprint, bundle.fingerprint + "\n");
  nlohmann::json mj = {{"task_count", bundle.manifest.task_count},
                       {"instance_count", bundle.manifest.instance_count},
                       {"sealed_at", bundle.sealed_at}};
  write_file(manifest, mj.dump(2) + "\n");
}

SealedBundle load_sealed_bundle(const std::filesystem::path& base) {
  std::filesystem::path sealed = base;
  sealed += ".sealed";
  std::filesystem::path fingerprint = base;
  fingerprint += ".fingerprint";
  std::filesystem::path manifest = base;
  manifest += ".manifest.json";

  SealedBundle bundle;
  const std::string raw = read_file(sealed);
  bundle.ciphertext.assign(raw.begin(), raw.end());
  std::string fp = read_file(fingerprint);
  while (!fp.empty() && (fp.back() == '\n' || fp.back() == '\r')) fp.pop_back();
  bundle.fingerprint = fp;

  nlohmann::json mj = nlohmann::json::parse(read_file(manifest), nullptr, false);
  if (!mj.is_discarded()) {
    bundle.manifest.task_count = mj.value("task_count", 0);
    bundle.manifest.instance_count = mj.value("instance_count", 0);
    bundle.sealed_at = mj.value("sealed_at", Timestamp{0});
  }
  return bundle;
}

}  // namespace sealev
