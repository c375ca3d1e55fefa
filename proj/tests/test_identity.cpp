#include "kljn/error.hpp"
#include "kljn/identity.hpp"
#include "kljn/secp256k1.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace kljn;
namespace ec = kljn::secp256k1;

mpz_class to_mpz(const ec::U256& v) { return mpz_class(ec::to_hex(v), 16); }

void expect_same(const ec::AffinePoint& a, const oracle::Point& b) {
    ASSERT_EQ(a.infinity, b.inf);
    if (!a.infinity) {
        EXPECT_EQ(to_mpz(a.x), b.x);
        EXPECT_EQ(to_mpz(a.y), b.y);
    }
}

TEST(Secp256k1, ConstantsMatchOracle) {
    EXPECT_EQ(to_mpz(ec::field_prime()), oracle::p());
    EXPECT_EQ(to_mpz(ec::group_order()), oracle::n());
    expect_same(ec::generator(), oracle::g());
}

TEST(Secp256k1, SmallMultiplesMatchRepeatedAddition) {
    oracle::Point acc;
    for (unsigned k = 1; k <= 64; ++k) {
        acc = oracle::add(acc, oracle::g());
        expect_same(ec::multiply(k, ec::generator()), acc);
    }
}

TEST(Secp256k1, RandomScalarsMatchOracle) {
    std::mt19937_64 gen(99);
    for (int t = 0; t < 20; ++t) {
        std::string hex;
        for (int i = 0; i < 4; ++i) {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
            hex += buf;
        }
        const ec::U256 k = ec::parse_hex(hex) % ec::group_order();
        expect_same(ec::multiply(k, ec::generator()), oracle::mul(to_mpz(k), oracle::g()));
    }
}

TEST(Secp256k1, GroupLaws) {
    const auto g = ec::generator();
    EXPECT_TRUE(ec::multiply(ec::group_order(), g).infinity);
    EXPECT_EQ(ec::add(g, ec::negate(g)), ec::AffinePoint::at_infinity());
    EXPECT_EQ(ec::twice(g), ec::add(g, g));
    const auto p5 = ec::multiply(5, g), p7 = ec::multiply(7, g);
    EXPECT_EQ(ec::add(p5, p7), ec::multiply(12, g));
    EXPECT_TRUE(ec::on_curve(p5));
}

TEST(Secp256k1, HexHelpers) {
    EXPECT_EQ(ec::to_hex(1), std::string(63, '0') + "1");
    EXPECT_EQ(ec::parse_hex("ff"), ec::U256(255));
    EXPECT_THROW(ec::parse_hex(std::string(65, '1')), Error);
    EXPECT_THROW(ec::parse_hex("xyz"), Error);
}

keycodec::BitString bits_of(const ec::U256& v) { return keycodec::hex_to_binary(ec::to_hex(v)); }

TEST(Identity, GeneratorEncodings) {
    const auto pub = identity::public_from_private({1});
    const auto c = identity::compress_public(pub);
    EXPECT_EQ(c.size(), 66U);
    EXPECT_EQ(c.substr(0, 10), "0279be667e");
    const auto u = identity::uncompressed_public(pub);
    EXPECT_EQ(u.size(), 130U);
    EXPECT_EQ(u.substr(0, 2), "04");
    const auto d = oracle::decompress(c);
    EXPECT_EQ(to_mpz(pub.y), d.y);
}

TEST(Identity, ExampleKeyCompressesWithOddPrefix) {
    identity::PublicKey pk{
        ec::parse_hex("77914794f5cc4345c54a8b2374445593d1cc16c912e6ed0302217ee7432fbbb3"),
        ec::parse_hex("2b32ed8d951970a9e5b447af9855547408786d8aa65710752c731d0e1dbe4665")};
    EXPECT_EQ(identity::compress_public(pk),
              "0377914794f5cc4345c54a8b2374445593d1cc16c912e6ed0302217ee7432fbbb3");
}

TEST(Identity, NegatedScalarGivesNegatedPoint) {
    const ec::U256 k = 0x123456789abcdefULL;
    const auto a = identity::public_from_private({k});
    const auto b = identity::public_from_private({ec::group_order() - k});
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(b.y, ec::field_prime() - a.y);
}

TEST(Identity, PublicKeysAreHomomorphic) {
    const ec::U256 k1 = ec::parse_hex("f3a41783dcfdcc679324482f9595192b65c63fdc87c65d07efd3c78eecd5150d");
    const ec::U256 k2 = 0xdeadbeefULL;
    const auto p1 = identity::public_from_private({k1});
    const auto p2 = identity::public_from_private({k2});
    const auto sum = ec::add({p1.x, p1.y, false}, {p2.x, p2.y, false});
    const auto p12 = identity::public_from_private({(k1 + k2) % ec::group_order()});
    EXPECT_EQ(sum.x, p12.x);
    EXPECT_EQ(sum.y, p12.y);
}

TEST(Identity, DeriveRejectsOutOfRange) {
    auto kind = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    EXPECT_EQ(kind([] { identity::derive_private_key(bits_of(0)); }), ErrorKind::KeyOutOfRange);
    EXPECT_EQ(kind([] { identity::derive_private_key(bits_of(ec::group_order())); }),
              ErrorKind::KeyOutOfRange);
    EXPECT_EQ(kind([] { identity::derive_private_key(keycodec::BitString::parse("0101")); }),
              ErrorKind::InvalidLength);
    EXPECT_EQ(kind([] { identity::public_from_private({0}); }), ErrorKind::KeyOutOfRange);
    const auto k = identity::derive_private_key(bits_of(ec::group_order() - 1));
    EXPECT_EQ(k.scalar, ec::group_order() - 1);
}

TEST(Identity, DidDocumentSchema) {
    const auto pub = identity::public_from_private({1});
    const auto doc = identity::build_did_document(pub, "Binary test 6", "goerli");
    EXPECT_EQ(doc.did.substr(0, 28), "did:ethr:goerli:0x0279be667e");
    EXPECT_EQ(doc.did.size(), std::string("did:ethr:goerli:0x").size() + 66);
    EXPECT_EQ(doc.provider, "did:ethr:goerli");
    const auto j = identity::to_json(doc);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"did", "controllerKeyId", "keys", "kms", "services",
                                              "provider", "alias"}));
    const auto& entry = j["keys"][0];
    EXPECT_EQ(entry["type"], "Secp256k1");
    EXPECT_EQ(entry["kid"].get<std::string>().size(), 130U);
    EXPECT_EQ(entry["publicKeyHex"], entry["kid"]);
    EXPECT_EQ(j["controllerKeyId"], entry["kid"]);
    EXPECT_EQ(entry["meta"]["algorithms"].get<std::vector<std::string>>(),
              (std::vector<std::string>{"ES256K", "ES256K-R", "eth_signTransaction",
                                        "eth_signTypedData", "eth_signMessage", "eth_rawSign"}));
    EXPECT_EQ(j["kms"], "local");
    EXPECT_TRUE(j["services"].empty());
    EXPECT_EQ(identity::build_did_document(pub, "", std::nullopt).did.substr(0, 12), "did:ethr:0x0");
}

} // namespace
