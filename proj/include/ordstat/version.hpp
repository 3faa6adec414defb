#pragma once

#define ORDSTAT_VERSION "0.1.0"
