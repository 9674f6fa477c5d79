#!/usr/bin/env python3
"""Independent oracle for the frozen known-answer values in oracle_vectors.hpp.

Everything here is computed with the Python standard library (hashlib/hmac),
a from-scratch X25519 Montgomery ladder, and the pure-Python `pyaes` block
cipher. None of it shares code with the C++ library under test. Published
vectors (RFC 7748, RFC 5869, RFC 4231, SP 800-38A, PBKDF2-SHA256) are checked
against these implementations before being emitted.

Usage: python3 gen_vectors.py > ../unit/oracle_vectors.hpp
"""

import hashlib
import hmac
import sys

import pyaes

# --- X25519 (RFC 7748 ladder) ----------------------------------------------

P = 2**255 - 19
A24 = 121665


def _decode_scalar(k: bytes) -> int:
    b = bytearray(k)
    b[0] &= 248
    b[31] &= 127
    b[31] |= 64
    return int.from_bytes(b, "little")


def _decode_u(u: bytes) -> int:
    b = bytearray(u)
    b[31] &= 127
    return int.from_bytes(b, "little") % P


def x25519(k: bytes, u: bytes) -> bytes:
    scalar = _decode_scalar(k)
    x1 = _decode_u(u)
    x2, z2, x3, z3 = 1, 0, x1, 1
    swap = 0
    for t in reversed(range(255)):
        bit = (scalar >> t) & 1
        swap ^= bit
        if swap:
            x2, x3, z2, z3 = x3, x2, z3, z2
        swap = bit
        a = (x2 + z2) % P
        aa = a * a % P
        b = (x2 - z2) % P
        bb = b * b % P
        e = (aa - bb) % P
        c = (x3 + z3) % P
        d = (x3 - z3) % P
        da = d * a % P
        cb = c * b % P
        x3 = (da + cb) ** 2 % P
        z3 = x1 * (da - cb) ** 2 % P
        x2 = aa * bb % P
        z2 = e * (aa + A24 * e) % P
    if swap:
        x2, x3, z2, z3 = x3, x2, z3, z2
    return (x2 * pow(z2, P - 2, P) % P).to_bytes(32, "little")


BASE = (9).to_bytes(32, "little")

# --- HMAC / HKDF / PBKDF2 ---------------------------------------------------


def hmac_sha256(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def hkdf(ikm: bytes, salt: bytes, info: bytes, length: int) -> bytes:
    prk = hmac_sha256(salt, ikm)
    out, block, i = b"", b"", 1
    while len(out) < length:
        block = hmac_sha256(prk, block + info + bytes([i]))
        out += block
        i += 1
    return out[:length]


def pbkdf2(password: bytes, salt: bytes, iterations: int, length: int) -> bytes:
    out = b""
    i = 1
    while len(out) < length:
        u = hmac_sha256(password, salt + i.to_bytes(4, "big"))
        acc = bytearray(u)
        for _ in range(iterations - 1):
            u = hmac_sha256(password, u)
            for j in range(32):
                acc[j] ^= u[j]
        out += bytes(acc)
        i += 1
    return out[:length]


# --- AES-256-CBC via pyaes ---------------------------------------------------


def aes_cbc_encrypt_raw(key: bytes, iv: bytes, data: bytes) -> bytes:
    assert len(data) % 16 == 0
    cipher = pyaes.AES(key)
    prev = iv
    out = b""
    for off in range(0, len(data), 16):
        block = bytes(a ^ b for a, b in zip(data[off:off + 16], prev))
        prev = bytes(cipher.encrypt(list(block)))
        out += prev
    return out


def pkcs7(data: bytes) -> bytes:
    pad = 16 - len(data) % 16
    return data + bytes([pad]) * pad


# --- the library's key schedule, re-derived from its stated formulas --------

ZERO32 = bytes(32)
ARROW = "→".encode()


def init_chains(master: bytes, lo: str, hi: str):
    base = b"chain|" + lo.encode() + b"|" + hi.encode() + b"|"
    a_to_b = hkdf(master, ZERO32, base + b"A" + ARROW + b"B", 32)
    b_to_a = hkdf(master, ZERO32, base + b"B" + ARROW + b"A", 32)
    return a_to_b, b_to_a


def ratchet(chain_key: bytes):
    material = hkdf(hmac_sha256(chain_key, b"\x01"), ZERO32, b"msg", 80)
    nxt = hmac_sha256(chain_key, b"\x02")
    return material[:32], material[32:64], material[64:80], nxt


def seal(cipher_key, mac_key, iv, plaintext, ad):
    ct = aes_cbc_encrypt_raw(cipher_key, iv, pkcs7(plaintext))
    return ct, hmac_sha256(mac_key, ad + ct)


# --- published vectors, checked against the oracles above --------------------

H = bytes.fromhex

RFC7748 = dict(
    alice_priv=H("77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a"),
    alice_pub=H("8520f0098930a754748b7ddcb43ef75a0dbf3a0d26381af4eba4a98eaa9b4e6a"),
    bob_priv=H("5dab087e624a8a4b79e17f8b83800ee66f3bb1292618b6fd1c2f8b27ff88e0eb"),
    bob_pub=H("de9edb7d7b7dc1b4d35b61c2ece435373f8343c85b78674dadfc7e146f882b4f"),
    shared=H("4a5d9d5ba4ce2de1728e3bf480350f25e07e21c947d19e3376f09b3c1e161742"),
)
assert x25519(RFC7748["bob_priv"], BASE) == RFC7748["bob_pub"]
assert x25519(RFC7748["alice_priv"], BASE) == RFC7748["alice_pub"]
assert x25519(RFC7748["alice_priv"], RFC7748["bob_pub"]) == RFC7748["shared"]
assert x25519(RFC7748["bob_priv"], RFC7748["alice_pub"]) == RFC7748["shared"]

# RFC 5869 A.1-A.3 (SHA-256)
HKDF_CASES = [
    (H("0b" * 22), H("000102030405060708090a0b0c"), H("f0f1f2f3f4f5f6f7f8f9"), 42,
     H("3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf34007208d5b887185865")),
    (bytes(range(0x00, 0x50)), bytes(range(0x60, 0xb0)), bytes(range(0xb0, 0x100)), 82,
     H("b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c"
       "59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71"
       "cc30c58179ec3e87c14c01d5c1f3434f1d87")),
    (H("0b" * 22), b"", b"", 42,
     H("8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d9d201395faa4b61a96c8")),
]
for ikm, salt, info, n, okm in HKDF_CASES:
    assert hkdf(ikm, salt, info, n) == okm

# RFC 4231 test cases 1, 2 and 6
HMAC_CASES = [
    (H("0b" * 20), b"Hi There",
     H("b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7")),
    (b"Jefe", b"what do ya want for nothing?",
     H("5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843")),
    (H("aa" * 131), b"Test Using Larger Than Block-Size Key - Hash Key First",
     H("60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54")),
]
for key, msg, mac in HMAC_CASES:
    assert hmac_sha256(key, msg) == mac

# PBKDF2-HMAC-SHA256 (RFC 6070 inputs, SHA-256 outputs as published in RFC 7914 s.11 style tables)
PBKDF2_CASES = [
    (b"password", b"salt", 1, 32,
     H("120fb6cffcf8b32c43e7225256c4f837a86548c92ccc35480805987cb70be17b")),
    (b"password", b"salt", 2, 32,
     H("ae4d0c95af6b46d32d0adff928f06dd02a303f8ef3c251dfd6e2d85a95474c43")),
    (b"password", b"salt", 4096, 32,
     H("c5e478d59288c841aa530db6845c4c8d962893a001ce4e11a4963873aa98134a")),
    (b"passwordPASSWORDpassword", b"saltSALTsaltSALTsaltSALTsaltSALTsalt", 4096, 40,
     H("348c89dbcbd32b2f32d814b8116e84cf2b17347ebc1800181c4e2a1fb8dd53e1c635518c7dac47e9")),
]
for pw, salt, it, n, dk in PBKDF2_CASES:
    assert pbkdf2(pw, salt, it, n) == dk
    assert hashlib.pbkdf2_hmac("sha256", pw, salt, it, n) == dk

# NIST SP 800-38A F.2.5 CBC-AES256.Encrypt
AES_KEY = H("603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4")
AES_IV = H("000102030405060708090a0b0c0d0e0f")
AES_PT = H("6bc1bee22e409f96e93d7e117393172a"
           "ae2d8a571e03ac9c9eb76fac45af8e51"
           "30c81c46a35ce411e5fbc1191a0a52ef"
           "f69f2445df4f9b17ad2b417be66c3710")
AES_CT = H("f58c4c04d6e5f1ba779eabfb5f7bfbd6"
           "9cfc4e967edb808d679f777bc6702c7d"
           "39f23369a9d9bacfa530e26304231461"
           "b2eb05e2c39be9fcda6c19078c6a9d1b")
assert aes_cbc_encrypt_raw(AES_KEY, AES_IV, AES_PT) == AES_CT

# --- derived values for the library's own schedule ---------------------------

chain_ab, chain_ba = init_chains(ZERO32, "alice", "bob")
ck0_cipher, ck0_mac, ck0_iv, ck1 = ratchet(ZERO32)
ck1_cipher, ck1_mac, ck1_iv, ck2 = ratchet(ck1)
seal_ct, seal_mac = seal(ck0_cipher, ck0_mac, ck0_iv, b"hello, bob", b"header")
empty_ct, empty_mac = seal(ck0_cipher, ck0_mac, ck0_iv, b"", b"")

# Backup archive wrapping key: HKDF(backup_key, 0^32, "backup", 80) over the
# PBKDF2 output for ("correct horse", salt 0x00..0x0f, 10000 iterations).
backup_salt = bytes(range(16))
backup_key = pbkdf2(b"correct horse", backup_salt, 10000, 32)
backup_wrap = hkdf(backup_key, ZERO32, b"backup", 80)


def cxx_bytes(name: str, data: bytes) -> str:
    body = ", ".join(f"0x{b:02x}" for b in data)
    return f"inline constexpr std::uint8_t {name}[{len(data)}] = {{{body}}};\n"


def cxx_hex(name: str, data: bytes) -> str:
    return f'inline constexpr std::string_view {name} =\n    "{data.hex()}";\n'


out = sys.stdout
out.write("// Generated by tests/oracles/gen_vectors.py. Do not edit.\n")
out.write("#pragma once\n\n#include <cstdint>\n#include <string_view>\n\n")
out.write("namespace ledgerchat::testing::vectors {\n\n")
for k, v in RFC7748.items():
    out.write(cxx_hex(f"kX25519{''.join(p.title() for p in k.split('_'))}", v))
out.write("\n")
for i, (ikm, salt, info, n, okm) in enumerate(HKDF_CASES, 1):
    out.write(cxx_hex(f"kHkdf{i}Ikm", ikm))
    out.write(cxx_hex(f"kHkdf{i}Salt", salt))
    out.write(cxx_hex(f"kHkdf{i}Info", info))
    out.write(cxx_hex(f"kHkdf{i}Okm", okm))
out.write("\n")
for i, (key, msg, mac) in enumerate(HMAC_CASES, 1):
    out.write(cxx_hex(f"kHmac{i}Key", key))
    out.write(cxx_hex(f"kHmac{i}Msg", msg))
    out.write(cxx_hex(f"kHmac{i}Mac", mac))
out.write("\n")
for i, (pw, salt, it, n, dk) in enumerate(PBKDF2_CASES, 1):
    out.write(f'inline constexpr std::string_view kPbkdf2_{i}Password = "{pw.decode()}";\n')
    out.write(cxx_hex(f"kPbkdf2_{i}Salt", salt))
    out.write(f"inline constexpr std::uint32_t kPbkdf2_{i}Iterations = {it};\n")
    out.write(cxx_hex(f"kPbkdf2_{i}Key", dk))
out.write("\n")
out.write(cxx_hex("kAesKey", AES_KEY))
out.write(cxx_hex("kAesIv", AES_IV))
out.write(cxx_hex("kAesPlaintext", AES_PT))
out.write(cxx_hex("kAesCiphertext", AES_CT))
out.write("\n// init_chains(0^32, \"alice\", \"bob\")\n")
out.write(cxx_hex("kChainAliceToBob", chain_ab))
out.write(cxx_hex("kChainBobToAlice", chain_ba))
out.write("\n// ratchet_forward from chain key 0^32, two steps\n")
out.write(cxx_hex("kStep0CipherKey", ck0_cipher))
out.write(cxx_hex("kStep0MacKey", ck0_mac))
out.write(cxx_hex("kStep0Iv", ck0_iv))
out.write(cxx_hex("kStep1ChainKey", ck1))
out.write(cxx_hex("kStep1CipherKey", ck1_cipher))
out.write(cxx_hex("kStep1MacKey", ck1_mac))
out.write(cxx_hex("kStep1Iv", ck1_iv))
out.write(cxx_hex("kStep2ChainKey", ck2))
out.write("\n// seal(step-0 key, \"hello, bob\", ad = \"header\") and seal(step-0 key, \"\", \"\")\n")
out.write(cxx_hex("kSealCiphertext", seal_ct))
out.write(cxx_hex("kSealMac", seal_mac))
out.write(cxx_hex("kSealEmptyCiphertext", empty_ct))
out.write(cxx_hex("kSealEmptyMac", empty_mac))
out.write("\n// backup: PBKDF2(\"correct horse\", 00..0f, 10000) then HKDF(.., \"backup\", 80)\n")
out.write(cxx_hex("kBackupKey", backup_key))
out.write(cxx_hex("kBackupWrap", backup_wrap))
out.write("\n}  // namespace ledgerchat::testing::vectors\n")
