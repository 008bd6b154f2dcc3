// placeholder; filled in alongside its header
