#pragma once

#include "rfid28560/bits.hpp"
#include "rfid28560/code40.hpp"
#include "rfid28560/config.hpp"
#include "rfid28560/crc16.hpp"
#include "rfid28560/epc.hpp"
#include "rfid28560/errors.hpp"
#include "rfid28560/fixed.hpp"
#include "rfid28560/hybrid.hpp"
#include "rfid28560/model.hpp"
#include "rfid28560/registry.hpp"
#include "rfid28560/tag.hpp"
