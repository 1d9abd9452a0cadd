#pragma once

#include <string_view>

#include "busod/model.h"

namespace busod {

// Keyed one-way pseudonym: the first 48 bits of HMAC-SHA256(key, id), so the
// result is again a valid device id. Equal inputs map to equal outputs under
// one key, which keeps every count-based analysis unchanged.
device_id hash_device(device_id const& id, std::string_view key);

}  // namespace busod
