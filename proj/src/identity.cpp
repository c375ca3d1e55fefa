#include "kljn/identity.hpp"

#include "kljn/error.hpp"

namespace kljn::identity {

PrivateKey derive_private_key(const keycodec::BitString& bits) {
    if (bits.size() != 256)
        throw Error(ErrorKind::InvalidLength,
                    "private key needs 256 bits, got " + std::to_string(bits.size()));
    U256 scalar = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        scalar = (scalar << 1) | bits[i];
    if (scalar == 0 || scalar >= secp256k1::group_order())
        throw Error(ErrorKind::KeyOutOfRange, "scalar must satisfy 1 <= k < n");
    return {scalar};
}

PrivateKey derive_private_key(const exchange::KeyMaterial& key) { return derive_private_key(key.bits); }

PublicKey public_from_private(const PrivateKey& key) {
    if (key.scalar == 0 || key.scalar >= secp256k1::group_order())
        throw Error(ErrorKind::KeyOutOfRange, "scalar must satisfy 1 <= k < n");
    const auto point = secp256k1::multiply(key.scalar, secp256k1::generator());
    if (point.infinity || !secp256k1::on_curve(point))
        throw Error(ErrorKind::InvalidConfig, "derived public key is not on the curve");
    return {point.x, point.y};
}

std::string compress_public(const PublicKey& key) {
    const bool odd = (key.y & 1) != 0;
    return (odd ? "03" : "02") + secp256k1::to_hex(key.x);
}

std::string uncompressed_public(const PublicKey& key) {
    return "04" + secp256k1::to_hex(key.x) + secp256k1::to_hex(key.y);
}

DidDocument build_did_document(const PublicKey& key, const std::string& alias,
                               const std::optional<std::string>& network) {
    DidDocument doc;
    doc.provider = "did:ethr";
    if (network && !network->empty())
        doc.provider += ":" + *network;
    doc.did = doc.provider + ":0x" + compress_public(key);
    doc.controller_key_id = uncompressed_public(key);
    doc.keys.push_back({"Secp256k1", doc.controller_key_id, doc.controller_key_id,
                        signing_algorithms()});
    doc.kms = "local";
    doc.alias = alias;
    return doc;
}

nlohmann::ordered_json to_json(const DidDocument& document) {
    nlohmann::ordered_json j;
    j["did"] = document.did;
    j["controllerKeyId"] = document.controller_key_id;
    j["keys"] = nlohmann::ordered_json::array();
    for (const auto& key : document.keys) {
        nlohmann::ordered_json entry;
        entry["type"] = key.type;
        entry["kid"] = key.kid;
        entry["publicKeyHex"] = key.public_key_hex;
        entry["meta"]["algorithms"] = key.algorithms;
        j["keys"].push_back(entry);
    }
    j["kms"] = document.kms;
    j["services"] = document.services;
    j["provider"] = document.provider;
    j["alias"] = document.alias;
    return j;
}

} // namespace kljn::identity
