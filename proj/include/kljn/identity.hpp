#pragma once

// secp256k1 keypair from a 256-bit exchanged key, and a did:ethr style
// identity document.

#include "kljn/exchange.hpp"
#include "kljn/keycodec.hpp"
#include "kljn/secp256k1.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kljn::identity {

using secp256k1::U256;

struct PrivateKey {
    U256 scalar = 0;
};

struct PublicKey {
    U256 x = 0;
    U256 y = 0;
    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

/// Big-endian reading of exactly 256 bits (InvalidLength otherwise).
/// Throws KeyOutOfRange unless 1 <= scalar < n; never reduces mod n.
PrivateKey derive_private_key(const keycodec::BitString& bits);
PrivateKey derive_private_key(const exchange::KeyMaterial& key);

/// Throws KeyOutOfRange for an invalid scalar. The result is checked against
/// the curve equation before it is returned.
PublicKey public_from_private(const PrivateKey& key);

/// "02" or "03" (y parity) followed by x: 66 hex characters.
std::string compress_public(const PublicKey& key);
/// "04" + x + y: 130 hex characters.
std::string uncompressed_public(const PublicKey& key);

inline const std::vector<std::string>& signing_algorithms() {
    static const std::vector<std::string> algorithms{
        "ES256K", "ES256K-R", "eth_signTransaction", "eth_signTypedData", "eth_signMessage",
        "eth_rawSign"};
    return algorithms;
}

struct KeyEntry {
    std::string type;
    std::string kid;
    std::string public_key_hex;
    std::vector<std::string> algorithms;
};

struct DidDocument {
    std::string did;
    std::string controller_key_id;
    std::vector<KeyEntry> keys;
    std::string kms;
    std::vector<std::string> services;
    std::string provider;
    std::string alias;
};

DidDocument build_did_document(const PublicKey& key, const std::string& alias,
                               const std::optional<std::string>& network);

/// Field order: did, controllerKeyId, keys, kms, services, provider, alias.
nlohmann::ordered_json to_json(const DidDocument& document);

} // namespace kljn::identity
