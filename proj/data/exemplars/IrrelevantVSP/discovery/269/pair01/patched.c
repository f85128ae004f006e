int run_user_script(const char *script)
{
    if (setuid(getuid()) != 0)
        return -1;
    return execl(script, script, (char *)NULL);
}
