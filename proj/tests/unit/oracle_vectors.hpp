// Generated by tests/oracles/gen_vectors.py. Do not edit.
#pragma once

#include <cstdint>
#include <string_view>

namespace ledgerchat::testing::vectors {

inline constexpr std::string_view kX25519AlicePriv =
    "77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a";
inline constexpr std::string_view kX25519AlicePub =
    "8520f0098930a754748b7ddcb43ef75a0dbf3a0d26381af4eba4a98eaa9b4e6a";
inline constexpr std::string_view kX25519BobPriv =
    "5dab087e624a8a4b79e17f8b83800ee66f3bb1292618b6fd1c2f8b27ff88e0eb";
inline constexpr std::string_view kX25519BobPub =
    "de9edb7d7b7dc1b4d35b61c2ece435373f8343c85b78674dadfc7e146f882b4f";
inline constexpr std::string_view kX25519Shared =
    "4a5d9d5ba4ce2de1728e3bf480350f25e07e21c947d19e3376f09b3c1e161742";

inline constexpr std::string_view kHkdf1Ikm =
    "0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b";
inline constexpr std::string_view kHkdf1Salt =
    "000102030405060708090a0b0c";
inline constexpr std::string_view kHkdf1Info =
    "f0f1f2f3f4f5f6f7f8f9";
inline constexpr std::string_view kHkdf1Okm =
    "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865";
inline constexpr std::string_view kHkdf2Ikm =
    "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f202122232425262728292a2b2c2d2e2f303132333435363738393a3b3c3d3e3f404142434445464748494a4b4c4d4e4f";
inline constexpr std::string_view kHkdf2Salt =
    "606162636465666768696a6b6c6d6e6f707172737475767778797a7b7c7d7e7f808182838485868788898a8b8c8d8e8f909192939495969798999a9b9c9d9e9fa0a1a2a3a4a5a6a7a8a9aaabacadaeaf";
inline constexpr std::string_view kHkdf2Info =
    "b0b1b2b3b4b5b6b7b8b9babbbcbdbebfc0c1c2c3c4c5c6c7c8c9cacbcccdcecfd0d1d2d3d4d5d6d7d8d9dadbdcdddedfe0e1e2e3e4e5e6e7e8e9eaebecedeeeff0f1f2f3f4f5f6f7f8f9fafbfcfdfeff";
inline constexpr std::string_view kHkdf2Okm =
    "b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71cc30c58179ec3e87c14c01d5c1f3434f1d87";
inline constexpr std::string_view kHkdf3Ikm =
    "0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b";
inline constexpr std::string_view kHkdf3Salt =
    "";
inline constexpr std::string_view kHkdf3Info =
    "";
inline constexpr std::string_view kHkdf3Okm =
    "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d9d201395faa4b61a96c8";

inline constexpr std::string_view kHmac1Key =
    "0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b0b";
inline constexpr std::string_view kHmac1Msg =
    "4869205468657265";
inline constexpr std::string_view kHmac1Mac =
    "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7";
inline constexpr std::string_view kHmac2Key =
    "4a656665";
inline constexpr std::string_view kHmac2Msg =
    "7768617420646f2079612077616e7420666f72206e6f7468696e673f";
inline constexpr std::string_view kHmac2Mac =
    "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843";
inline constexpr std::string_view kHmac3Key =
    "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
inline constexpr std::string_view kHmac3Msg =
    "54657374205573696e67204c6172676572205468616e20426c6f636b2d53697a65204b6579202d2048617368204b6579204669727374";
inline constexpr std::string_view kHmac3Mac =
    "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54";

inline constexpr std::string_view kPbkdf2_1Password = "password";
inline constexpr std::string_view kPbkdf2_1Salt =
    "73616c74";
inline constexpr std::uint32_t kPbkdf2_1Iterations = 1;
inline constexpr std::string_view kPbkdf2_1Key =
    "120fb6cffcf8b32c43e7225256c4f837a86548c92ccc35480805987cb70be17b";
inline constexpr std::string_view kPbkdf2_2Password = "password";
inline constexpr std::string_view kPbkdf2_2Salt =
    "73616c74";
inline constexpr std::uint32_t kPbkdf2_2Iterations = 2;
inline constexpr std::string_view kPbkdf2_2Key =
    "ae4d0c95af6b46d32d0adff928f06dd02a303f8ef3c251dfd6e2d85a95474c43";
inline constexpr std::string_view kPbkdf2_3Password = "password";
inline constexpr std::string_view kPbkdf2_3Salt =
    "73616c74";
inline constexpr std::uint32_t kPbkdf2_3Iterations = 4096;
inline constexpr std::string_view kPbkdf2_3Key =
    "c5e478d59288c841aa530db6845c4c8d962893a001ce4e11a4963873aa98134a";
inline constexpr std::string_view kPbkdf2_4Password = "passwordPASSWORDpassword";
inline constexpr std::string_view kPbkdf2_4Salt =
    "73616c7453414c5473616c7453414c5473616c7453414c5473616c7453414c5473616c74";
inline constexpr std::uint32_t kPbkdf2_4Iterations = 4096;
inline constexpr std::string_view kPbkdf2_4Key =
    "348c89dbcbd32b2f32d814b8116e84cf2b17347ebc1800181c4e2a1fb8dd53e1c635518c7dac47e9";

inline constexpr std::string_view kAesKey =
    "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4";
inline constexpr std::string_view kAesIv =
    "000102030405060708090a0b0c0d0e0f";
inline constexpr std::string_view kAesPlaintext =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710";
inline constexpr std::string_view kAesCiphertext =
    "f58c4c04d6e5f1ba779eabfb5f7bfbd69cfc4e967edb808d679f777bc6702c7d39f23369a9d9bacfa530e26304231461b2eb05e2c39be9fcda6c19078c6a9d1b";

// init_chains(0^32, "alice", "bob")
inline constexpr std::string_view kChainAliceToBob =
    "3df085180efacc0acacd3a6030629a744fda3aeb50d72a483e7b79df26d3c81f";
inline constexpr std::string_view kChainBobToAlice =
    "a4e5ac63d5692de49d10f7a330c3efa7395dc47765b49550870c2dcc0776a60e";

// ratchet_forward from chain key 0^32, two steps
inline constexpr std::string_view kStep0CipherKey =
    "25911edd38086981c18ae1aae8b662569e356b95d41f7f64049b03add33a7954";
inline constexpr std::string_view kStep0MacKey =
    "0c904e9a7ed4fb66efdd01c2e7aa17b4136ec3d4fc3db2f1e320dd43d1b00b59";
inline constexpr std::string_view kStep0Iv =
    "38b896dcfa02bfdb67481349c6f96658";
inline constexpr std::string_view kStep1ChainKey =
    "4ee7be0c7872360ca67414608081e9bd60fd580a7bbd209701d2a5a0b4316d0d";
inline constexpr std::string_view kStep1CipherKey =
    "ea4367705b3359e80cc0b5fc40b7d66ea167a9765fa14391f57dc4acc13814f0";
inline constexpr std::string_view kStep1MacKey =
    "d38176c3ded07c08a25589db803c6b33d103ba398d7d859c9bfb29fd8db6b8d8";
inline constexpr std::string_view kStep1Iv =
    "bcece5c99aa727e7cf5d2482e1dcfdf9";
inline constexpr std::string_view kStep2ChainKey =
    "4d86454c5efcc9ba57d80aeae3cb311862e51dad6919aff0fb35f4bdafe57d53";

// seal(step-0 key, "hello, bob", ad = "header") and seal(step-0 key, "", "")
inline constexpr std::string_view kSealCiphertext =
    "d89ad4fec0e8f186bcf773fcbc1e31b0";
inline constexpr std::string_view kSealMac =
    "5dd74bb5c28c2885930f2387d743ad660a494eb3aaa5c33e37c25492c9d52bd2";
inline constexpr std::string_view kSealEmptyCiphertext =
    "c572816738ea83c3c8e169e4f1d4d054";
inline constexpr std::string_view kSealEmptyMac =
    "5ca45d543347d9102f50cba6bee17aa1a05631fa540d9a0c9165c3985ac0304c";

// backup: PBKDF2("correct horse", 00..0f, 10000) then HKDF(.., "backup", 80)
inline constexpr std::string_view kBackupKey =
    "e515070e0353a7db013961984b87babb9edccff4aadff4d081a0cfffc316e8bf";
inline constexpr std::string_view kBackupWrap =
    "17ca9762af7f56088c6b9ea8bb8867c18b5e51e68a7476aaf321d8995ab2e025c32d33f6387e846718bbbb612c42440db0382c17be1df0c1dfcfb5cea61004e4e7204a777b88666b20bc6f5791d382a2";

}  // namespace ledgerchat::testing::vectors
