#include "busod/privacy.h"

#include <array>

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "fmt/format.h"

#include "busod/errors.h"

namespace busod {

device_id hash_device(device_id const& id, std::string_view key) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  auto const& text = id.str();
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<unsigned char const*>(text.data()), text.size(),
           digest.data(), &len) == nullptr ||
      len < 6) {
    throw error("HMAC computation failed");
  }
  std::string hex;
  for (auto i = 0U; i != 6; ++i) {
    hex += fmt::format("{:02x}", digest[i]);
  }
  return device_id::parse(hex);
}

}  // namespace busod
