#include "blockflow/store.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace blockflow {

static Digest envelope_key(const Account& sender, const Account& receiver) {
  std::string material = "blockflow-env|" + sender + "|" + receiver;
  return sha256(material);
}

Envelope seal(const Account& sender, const Account& receiver,
              const std::vector<uint8_t>& plaintext) {
  if (sender == receiver)
    throw StoreError("seal: sender and receiver must differ");
  Digest key = envelope_key(sender, receiver);

  // Deterministic SIV-style nonce keeps whole-run determinism; confidentiality
  // here emulates access control, not IND-CPA strength.
  std::vector<uint8_t> material(key.begin(), key.end());
  material.insert(material.end(), plaintext.begin(), plaintext.end());
  Digest nd = sha256(material.data(), material.size());

  Envelope env{sender, receiver, {}};
  env.ciphertext.resize(12 + 16 + plaintext.size());
  std::copy(nd.begin(), nd.begin() + 12, env.ciphertext.begin());

  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (!ctx) throw StoreError("seal: cipher init failed");
  int len = 0;
  bool ok = EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                               env.ciphertext.data()) == 1;
  if (ok && !plaintext.empty())
    ok = EVP_EncryptUpdate(ctx, env.ciphertext.data() + 28, &len,
                           plaintext.data(), (int)plaintext.size()) == 1;
  int fin = 0;
  if (ok) ok = EVP_EncryptFinal_ex(ctx, env.ciphertext.data() + 28 + len, &fin) == 1;
  if (ok)
    ok = EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, 16,
                             env.ciphertext.data() + 12) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw StoreError("seal: encryption failed");
  return env;
}

std::vector<uint8_t> open_envelope(const Account& party, const Envelope& env) {
  if (party != env.sender && party != env.receiver)
    throw StoreError("open: party is neither sender nor receiver");
  if (env.ciphertext.size() < 28) throw StoreError("open: envelope truncated");
  Digest key = envelope_key(env.sender, env.receiver);

  size_t body_len = env.ciphertext.size() - 28;
  std::vector<uint8_t> out(body_len);
  std::vector<uint8_t> tag(env.ciphertext.begin() + 12,
                           env.ciphertext.begin() + 28);

  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (!ctx) throw StoreError("open: cipher init failed");
  int len = 0;
  bool ok = EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                               env.ciphertext.data()) == 1;
  if (ok && body_len > 0)
    ok = EVP_DecryptUpdate(ctx, out.data(), &len,
                           env.ciphertext.data() + 28, (int)body_len) == 1;
  if (ok)
    ok = EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, 16, tag.data()) == 1;
  int fin = 0;
  if (ok) ok = EVP_DecryptFinal_ex(ctx, out.data() + len, &fin) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok) throw StoreError("open: authentication failed");
  return out;
}

Store::Store(const std::string& dir) : dir_(dir) {
  fs::create_directories(dir_);
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() != ".blob") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    ContentAddress addr{sha256(bytes.data(), bytes.size())};
    blobs_[addr] = std::move(bytes);
  }
  fs::path idx = fs::path(dir_) / "providers.json";
  if (fs::exists(idx)) {
    std::ifstream in(idx);
    nlohmann::json j = nlohmann::json::parse(in);
    for (auto& [hexdigest, accounts] : j.items()) {
      for (const auto& [addr, bytes] : blobs_) {
        if (addr.hex() == hexdigest)
          for (const auto& a : accounts)
            providers_[addr].insert(a.get<std::string>());
      }
    }
  }
}

ContentAddress Store::put(const Account& holder,
                          const std::vector<uint8_t>& bytes) {
  if (bytes.empty()) throw StoreError("put: empty blob");
  ContentAddress addr{sha256(bytes.data(), bytes.size())};
  blobs_[addr] = bytes;  // re-put repairs a tampered copy
  providers_[addr].insert(holder);
  if (!dir_.empty()) {
    persist(addr);
    persist_index();
  }
  return addr;
}

std::vector<uint8_t> Store::get(const Account& requester,
                                const ContentAddress& addr) const {
  auto it = blobs_.find(addr);
  if (it == blobs_.end()) throw StoreError("get: unknown address");
  bool served = false;
  auto pit = providers_.find(addr);
  if (pit != providers_.end())
    for (const auto& p : pit->second)
      if (reachable(requester, p)) {
        served = true;
        break;
      }
  if (!served) throw StoreError("get: no reachable provider");
  Digest actual = sha256(it->second.data(), it->second.size());
  if (actual != addr.digest) throw StoreError("get: content hash mismatch");
  return it->second;
}

bool Store::known(const ContentAddress& addr) const {
  return blobs_.count(addr) > 0;
}

std::vector<Account> Store::providers(const ContentAddress& addr) const {
  auto it = providers_.find(addr);
  if (it == providers_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void Store::block(const Account& from, const Account& to) {
  blocked_.insert({from, to});
}

void Store::unblock(const Account& from, const Account& to) {
  blocked_.erase({from, to});
}

bool Store::reachable(const Account& from, const Account& to) const {
  if (from == to) return true;
  return blocked_.count({from, to}) == 0;
}

void Store::corrupt(const ContentAddress& addr, size_t bit_index) {
  auto it = blobs_.find(addr);
  if (it == blobs_.end()) throw StoreError("corrupt: unknown address");
  auto& bytes = it->second;
  bytes[(bit_index / 8) % bytes.size()] ^= (uint8_t)(1u << (bit_index % 8));
  if (!dir_.empty()) persist(addr);
}

void Store::persist(const ContentAddress& addr) {
  fs::path p = fs::path(dir_) / (addr.hex() + ".blob");
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  const auto& bytes = blobs_.at(addr);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            (std::streamsize)bytes.size());
}

void Store::persist_index() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [addr, accounts] : providers_)
    j[addr.hex()] = std::vector<Account>(accounts.begin(), accounts.end());
  std::ofstream out(fs::path(dir_) / "providers.json", std::ios::trunc);
  out << j.dump(2) << "\n";
}

}  // namespace blockflow
