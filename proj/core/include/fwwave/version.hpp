#pragma once

#define FWWAVE_VERSION "0.1.0"
