#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockflow/hash.hpp"

namespace blockflow {

using Account = std::string;

struct StoreError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Content address: the SHA-256 digest of the stored bytes.
struct ContentAddress {
  Digest digest{};

  std::string hex() const { return to_hex(digest); }
  bool operator==(const ContentAddress& o) const { return digest == o.digest; }
  bool operator<(const ContentAddress& o) const { return digest < o.digest; }
};

// Per-ordered-pair confidential envelope. Only sender and receiver can open;
// any ciphertext tampering is detected on open.
struct Envelope {
  Account sender;
  Account receiver;
  std::vector<uint8_t> ciphertext;  // nonce(12) | tag(16) | body
};

Envelope seal(const Account& sender, const Account& receiver,
              const std::vector<uint8_t>& plaintext);
std::vector<uint8_t> open_envelope(const Account& party, const Envelope& env);

// Emulated IPFS: content-addressed blobs, a provider set per address, and a
// directed reachability relation (reflexive by construction). Optionally
// mirrors blobs into a directory, one file per address plus a provider index.
class Store {
 public:
  Store() = default;
  explicit Store(const std::string& dir);  // loads existing contents

  ContentAddress put(const Account& holder, const std::vector<uint8_t>& bytes);

  // Returns the blob if any provider is reachable from the requester and the
  // bytes still hash to the address. Throws StoreError otherwise.
  std::vector<uint8_t> get(const Account& requester,
                           const ContentAddress& addr) const;

  bool known(const ContentAddress& addr) const;
  std::vector<Account> providers(const ContentAddress& addr) const;

  // Reachability defaults to true for every pair; self-fetch is always
  // allowed regardless of blocks.
  void block(const Account& from, const Account& to);
  void unblock(const Account& from, const Account& to);
  bool reachable(const Account& from, const Account& to) const;

  // Flips one bit of the stored copy (storage-level tampering, for tests).
  void corrupt(const ContentAddress& addr, size_t bit_index);

  size_t blob_count() const { return blobs_.size(); }

 private:
  void persist(const ContentAddress& addr);
  void persist_index() const;

  std::map<ContentAddress, std::vector<uint8_t>> blobs_;
  std::map<ContentAddress, std::set<Account>> providers_;
  std::set<std::pair<Account, Account>> blocked_;
  std::string dir_;  // empty = in-memory only
};

}  // namespace blockflow
