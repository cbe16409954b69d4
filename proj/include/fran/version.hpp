#pragma once

#define FRAN_VERSION "0.1.0"
